// Copyright 2026 The editprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "editprob/ep_grad.hpp"

#include <cmath>
#include <string>

#include "editprob/ep_core.hpp"
#include "editprob/log_math.hpp"

namespace editprob {

EmissionGradients EmissionGradients::zerosLike(const EmissionSequence& em) {
  EmissionGradients g;
  const size_t a = em.alphabet.size();
  g.frames.resize(em.frames.size());
  for (auto& f : g.frames) {
    f.dY.assign(a, 0.0);
    f.dIns.assign(a, 0.0);
  }
  g.dFinalIns.assign(a, 0.0);
  return g;
}

void EmissionGradients::accumulate(const EmissionGradients& other, double scale) {
  if (other.frames.size() != frames.size() || other.dFinalIns.size() != dFinalIns.size()) {
    throw EpError(ErrorCode::kDimensionMismatch, "gradient shapes differ");
  }
  for (size_t j = 0; j < frames.size(); ++j) {
    auto& dst = frames[j];
    const auto& src = other.frames[j];
    for (size_t c = 0; c < dst.dY.size(); ++c) {
      dst.dY[c] += scale * src.dY[c];
      dst.dIns[c] += scale * src.dIns[c];
    }
    for (int k = 0; k < 3; ++k) {
      dst.dR[k] += scale * src.dR[k];
    }
  }
  for (size_t c = 0; c < dFinalIns.size(); ++c) {
    dFinalIns[c] += scale * other.dFinalIns[c];
  }
}

LossAndGradients epBackward(const EmissionSequence& em, const TargetString& target) {
  const LogEmissions tables(em);
  const EpMatrix alpha = epForward(em, target);
  const double logEp = alpha.final();
  if (logEp == kLogZero) {
    throw EpError(ErrorCode::kZeroProbability, "EP is zero; the loss is infinite");
  }

  const int len = target.size();
  const int n = em.length();
  const int eos = tables.eos();
  auto afterEos = [&](int i) { return i >= 1 && target.at(i) == eos; };

  // beta(i, j): log-sum over paths from (i, j) to (|T|, n)
  EpMatrix beta(len, n);
  beta.at(len, n) = 0.0;
  for (int i = len; i >= 0; --i) {
    for (int j = n; j >= 0; --j) {
      if (i == len && j == n) {
        continue;
      }
      double del = kLogZero;
      double ins = kLogZero;
      double cons = kLogZero;
      if (j < n) {
        del = beta.at(i, j + 1) + (afterEos(i) ? 0.0 : tables.remove()[j + 1]);
      }
      if (i < len) {
        const int next = target.at(i + 1);
        ins = beta.at(i + 1, j) + tables.insert(next)[j];
        if (j < n) {
          cons = beta.at(i + 1, j + 1) + tables.consume(next)[j + 1];
        }
      }
      beta.at(i, j) = logAdd(del, ins, cons);
    }
  }

  LossAndGradients out{-logEp, EmissionGradients::zerosLike(em)};
  auto& grads = out.grads;
  // weight of an edge src -> dst with its own probability factored out
  auto edge = [&](int si, int sj, int di, int dj) {
    return std::exp(alpha.at(si, sj) + beta.at(di, dj) - logEp);
  };

  for (int i = 0; i <= len; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i >= 1 && j >= 1) {
        const int c = target.at(i);
        const Frame& f = em.frame(j);
        const double g = edge(i - 1, j - 1, i, j);
        grads.frames[j - 1].dR.consume -= g * f.y[c];
        grads.frames[j - 1].dY[c] -= g * f.r.consume;
      }
      if (j >= 1 && !afterEos(i)) {
        grads.frames[j - 1].dR.remove -= edge(i, j - 1, i, j);
      }
      if (i >= 1) {
        const int c = target.at(i);
        const double g = edge(i - 1, j, i, j);
        if (j < n) {
          const Frame& next = em.frame(j + 1);
          grads.frames[j].dR.insert -= g * next.ins[c];
          grads.frames[j].dIns[c] -= g * next.r.insert;
        } else {
          grads.dFinalIns[c] -= g;
        }
      }
    }
  }
  return out;
}

BatchLoss batchLoss(
    const std::vector<EmissionSequence>& ems,
    const std::vector<TargetString>& targets) {
  if (ems.size() != targets.size()) {
    throw EpError(ErrorCode::kDimensionMismatch, "batch emissions and targets differ in length");
  }
  BatchLoss out;
  out.grads.reserve(ems.size());
  for (size_t k = 0; k < ems.size(); ++k) {
    try {
      auto item = epBackward(ems[k], targets[k]);
      out.loss += item.loss;
      out.grads.push_back(std::move(item.grads));
    } catch (const EpError& e) {
      throw EpError(e.code(), "batch item " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

namespace {

void softmaxJacobian(std::span<const double> p, std::span<const double> g, std::span<double> out) {
  double dot = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(g[k])) {
      throw EpError(ErrorCode::kZeroProbability, "non-finite probability gradient");
    }
    dot += p[k] * g[k];
  }
  for (size_t k = 0; k < p.size(); ++k) {
    out[k] = p[k] * (g[k] - dot);
  }
}

} // namespace

EmissionGradients chainSoftmax(const EmissionGradients& grads, const EmissionSequence& em) {
  if (grads.frames.size() != em.frames.size() || grads.dFinalIns.size() != em.finalIns.size()) {
    throw EpError(ErrorCode::kDimensionMismatch, "gradients do not match emissions");
  }
  EmissionGradients out = EmissionGradients::zerosLike(em);
  for (size_t j = 0; j < em.frames.size(); ++j) {
    const Frame& f = em.frames[j];
    const FrameGradients& g = grads.frames[j];
    softmaxJacobian(f.y, g.dY, out.frames[j].dY);
    softmaxJacobian(f.ins, g.dIns, out.frames[j].dIns);
    const std::array<double, 3> r{f.r.consume, f.r.insert, f.r.remove};
    const std::array<double, 3> dr{g.dR.consume, g.dR.insert, g.dR.remove};
    std::array<double, 3> dz{};
    softmaxJacobian(r, dr, dz);
    out.frames[j].dR = {dz[0], dz[1], dz[2]};
  }
  softmaxJacobian(em.finalIns, grads.dFinalIns, out.dFinalIns);
  return out;
}

} // namespace editprob
