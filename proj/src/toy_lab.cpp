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

#include "editprob/toy_lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "editprob/ep_core.hpp"
#include "editprob/rng.hpp"

namespace editprob::toy {

void SynthConfig::validate() const {
  auto fail = [](const std::string& msg) { throw EpError(ErrorCode::kInvalidArgument, msg); };
  if (alphabetSize < 1 || alphabetSize > 26) {
    fail("alphabetSize must be in [1, 26]");
  }
  if (resolvedFeatureDim() < alphabetSize + 1) {
    fail("featureDim must cover every symbol including EOS");
  }
  if (lenMin < 1 || lenMax < lenMin) {
    fail("need 1 <= lenMin <= lenMax");
  }
  if (!(pDrop >= 0.0 && pDrop <= 0.5) || !(pDup >= 0.0 && pDup <= 0.5)) {
    fail("pDrop and pDup must lie in [0, 0.5]");
  }
  if (!(noiseSigma >= 0.0)) {
    fail("noiseSigma must be non-negative");
  }
}

Alphabet toyAlphabet(int alphabetSize) {
  std::string letters;
  for (int k = 0; k < alphabetSize; ++k) {
    letters.push_back(static_cast<char>('a' + k));
  }
  return Alphabet::fromChars(letters, '#');
}

Corpus generateCorpus(const SynthConfig& cfg, int count) {
  cfg.validate();
  const Alphabet alphabet = toyAlphabet(cfg.alphabetSize);
  const int dim = cfg.resolvedFeatureDim();
  SplitMix64 rng(cfg.seed);
  auto render = [&](int symbol) {
    std::vector<double> x(dim);
    for (int d = 0; d < dim; ++d) {
      x[d] = (d == symbol ? 1.0 : 0.0) + cfg.noiseSigma * rng.normal();
    }
    return x;
  };

  Corpus corpus;
  corpus.reserve(count);
  for (int k = 0; k < count; ++k) {
    const int len = cfg.lenMin + static_cast<int>(rng.below(cfg.lenMax - cfg.lenMin + 1));
    std::vector<int> body(len);
    for (int& c : body) {
      c = static_cast<int>(rng.below(cfg.alphabetSize));
    }
    Sample s{{}, TargetString::withEos(body, alphabet), 0, 0};
    for (int c : body) {
      const bool drop = rng.uniform() < cfg.pDrop;
      const bool dup = rng.uniform() < cfg.pDup;
      if (drop) {
        ++s.droppedChars;
        continue;
      }
      s.features.push_back(render(c));
      if (dup) {
        ++s.duplicatedChars;
        s.features.push_back(render(c));
      }
    }
    s.features.push_back(render(alphabet.eos()));
    corpus.push_back(std::move(s));
  }
  return corpus;
}

void writeCorpus(std::ostream& out, const Corpus& corpus, const Alphabet& alphabet) {
  char buf[64];
  for (const auto& s : corpus) {
    for (size_t j = 0; j < s.features.size(); ++j) {
      if (j > 0) {
        out << ';';
      }
      for (size_t d = 0; d < s.features[j].size(); ++d) {
        if (d > 0) {
          out << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", s.features[j][d]);
        out << buf;
      }
    }
    out << '\t' << s.target.toString(alphabet) << '\n';
  }
}

Corpus readCorpus(std::istream& in, const Alphabet& alphabet) {
  Corpus corpus;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw EpError(ErrorCode::kParseError, "corpus line " + std::to_string(lineNo) + ": missing tab");
    }
    Sample s{{}, TargetString::parse(line.substr(tab + 1), alphabet), 0, 0};
    std::stringstream frames(line.substr(0, tab));
    std::string frame;
    size_t dim = 0;
    while (std::getline(frames, frame, ';')) {
      std::vector<double> x;
      std::stringstream values(frame);
      std::string v;
      while (std::getline(values, v, ',')) {
        try {
          size_t used = 0;
          x.push_back(std::stod(v, &used));
          if (used != v.size()) {
            throw std::invalid_argument(v);
          }
        } catch (const std::exception&) {
          throw EpError(
              ErrorCode::kParseError,
              "corpus line " + std::to_string(lineNo) + ": bad number '" + v + "'");
        }
      }
      if (dim == 0) {
        dim = x.size();
      } else if (x.size() != dim) {
        throw EpError(
            ErrorCode::kDimensionMismatch,
            "corpus line " + std::to_string(lineNo) + ": frames differ in width");
      }
      s.features.push_back(std::move(x));
    }
    corpus.push_back(std::move(s));
  }
  return corpus;
}

ToyModel::ToyModel(Alphabet alpha, int dim)
    : alphabet(std::move(alpha)),
      featureDim(dim),
      yHead(alphabet.size(), dim),
      rHead(3, dim),
      insHead(alphabet.size(), dim),
      finalScores(alphabet.size(), 0.0) {}

ToyModel ToyModel::random(Alphabet alphabet, int featureDim, uint64_t seed, double scale) {
  ToyModel m(std::move(alphabet), featureDim);
  SplitMix64 rng(seed);
  for (Head* h : {&m.yHead, &m.rHead, &m.insHead}) {
    for (double& w : h->weight) {
      w = scale * rng.normal();
    }
  }
  return m;
}

std::vector<std::span<double>> ToyModel::parameters() {
  return {yHead.weight, yHead.bias, rHead.weight, rHead.bias, insHead.weight, insHead.bias, finalScores};
}

std::vector<std::span<const double>> ToyModel::parameters() const {
  return {yHead.weight, yHead.bias, rHead.weight, rHead.bias, insHead.weight, insHead.bias, finalScores};
}

size_t ToyModel::parameterCount() const {
  size_t total = 0;
  for (const auto& p : parameters()) {
    total += p.size();
  }
  return total;
}

namespace {

void applyHead(const Head& h, std::span<const double> x, std::span<double> out) {
  for (int o = 0; o < h.outputs; ++o) {
    double z = h.bias[o];
    const double* w = h.weight.data() + static_cast<size_t>(o) * h.inputs;
    for (int d = 0; d < h.inputs; ++d) {
      z += w[d] * x[d];
    }
    out[o] = z;
  }
}

void softmaxInPlace(std::span<double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) {
    v /= sum;
  }
}

void accumulateHead(Head& grad, std::span<const double> dz, std::span<const double> x) {
  for (int o = 0; o < grad.outputs; ++o) {
    grad.bias[o] += dz[o];
    double* w = grad.weight.data() + static_cast<size_t>(o) * grad.inputs;
    for (int d = 0; d < grad.inputs; ++d) {
      w[d] += dz[o] * x[d];
    }
  }
}

ToyModel zerosLike(const ToyModel& model) {
  ToyModel g(model.alphabet, model.featureDim);
  g.framewise = model.framewise;
  return g;
}

LossAndGradients lossFor(const EmissionSequence& em, const TargetString& target, LossKind kind) {
  return kind == LossKind::kEp ? epBackward(em, target) : fpLoss(em, target);
}

} // namespace

EmissionSequence forwardModel(const ToyModel& model, const std::vector<std::vector<double>>& features) {
  const int a = model.alphabet.size();
  EmissionSequence em{model.alphabet, {}, model.finalScores};
  softmaxInPlace(em.finalIns);
  em.frames.reserve(features.size());
  std::array<double, 3> r{};
  for (const auto& x : features) {
    if (static_cast<int>(x.size()) != model.featureDim) {
      throw EpError(ErrorCode::kDimensionMismatch, "feature width does not match the model");
    }
    Frame f;
    f.y.resize(a);
    f.ins.resize(a);
    applyHead(model.yHead, x, f.y);
    softmaxInPlace(f.y);
    applyHead(model.insHead, x, f.ins);
    softmaxInPlace(f.ins);
    if (model.framewise) {
      f.r = {1.0, 0.0, 0.0};
    } else {
      applyHead(model.rHead, x, r);
      softmaxInPlace(r);
      f.r = {r[0], r[1], r[2]};
    }
    em.frames.push_back(std::move(f));
  }
  return em;
}

LossAndGradients fpLoss(const EmissionSequence& em, const TargetString& target) {
  LossAndGradients out{0.0, EmissionGradients::zerosLike(em)};
  const int upto = std::min(target.size(), em.length());
  for (int j = 1; j <= upto; ++j) {
    const int c = target.at(j);
    const double p = em.frame(j).y[c];
    out.loss -= std::log(p);
    out.grads.frames[j - 1].dY[c] = -1.0 / p;
  }
  return out;
}

SampleLoss sampleLoss(const ToyModel& model, const Sample& sample, LossKind kind) {
  const EmissionSequence em = forwardModel(model, sample.features);
  const auto lg = lossFor(em, sample.target, kind);
  const EmissionGradients dz = chainSoftmax(lg.grads, em);
  SampleLoss out{lg.loss, zerosLike(model)};
  for (size_t j = 0; j < sample.features.size(); ++j) {
    const auto& x = sample.features[j];
    const auto& fz = dz.frames[j];
    accumulateHead(out.grads.yHead, fz.dY, x);
    accumulateHead(out.grads.insHead, fz.dIns, x);
    if (!model.framewise) {
      const std::array<double, 3> dr{fz.dR.consume, fz.dR.insert, fz.dR.remove};
      accumulateHead(out.grads.rHead, dr, x);
    }
  }
  for (size_t c = 0; c < dz.dFinalIns.size(); ++c) {
    out.grads.finalScores[c] += dz.dFinalIns[c];
  }
  return out;
}

double sampleLossValue(const ToyModel& model, const Sample& sample, LossKind kind) {
  const EmissionSequence em = forwardModel(model, sample.features);
  if (kind == LossKind::kEp) {
    return -epScore(em, sample.target);
  }
  return fpLoss(em, sample.target).loss;
}

TrainResult train(ToyModel model, const Corpus& corpus, const Corpus& heldOut, const TrainOptions& options) {
  if (corpus.empty()) {
    throw EpError(ErrorCode::kInvalidArgument, "training corpus is empty");
  }
  if (options.batchSize < 1 || options.epochs < 0) {
    throw EpError(ErrorCode::kInvalidArgument, "batch size must be positive and epochs non-negative");
  }
  const auto start = std::chrono::steady_clock::now();
  if (options.loss == LossKind::kFp) {
    model.framewise = true;
  }

  auto params = model.parameters();
  std::vector<std::vector<double>> gradSq;
  std::vector<std::vector<double>> stepSq;
  for (const auto& p : params) {
    gradSq.emplace_back(p.size(), 0.0);
    stepSq.emplace_back(p.size(), 0.0);
  }

  SplitMix64 rng(options.seed);
  std::vector<size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  TrainReport report;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    // Fisher-Yates with the portable generator
    for (size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[rng.below(k)]);
    }
    double epochLoss = 0.0;
    for (size_t first = 0; first < order.size(); first += options.batchSize) {
      const size_t last = std::min(order.size(), first + options.batchSize);
      ToyModel batchGrad = zerosLike(model);
      auto batchParams = batchGrad.parameters();
      for (size_t k = first; k < last; ++k) {
        const SampleLoss s = [&] {
          try {
            return sampleLoss(model, corpus[order[k]], options.loss);
          } catch (const EpError& e) {
            if (e.code() != ErrorCode::kZeroProbability) {
              throw;
            }
            throw EpError(ErrorCode::kDivergedLoss, e.what());
          }
        }();
        if (!std::isfinite(s.loss)) {
          throw EpError(ErrorCode::kDivergedLoss, "non-finite loss in epoch " + std::to_string(epoch));
        }
        epochLoss += s.loss;
        auto sp = s.grads.parameters();
        for (size_t p = 0; p < sp.size(); ++p) {
          for (size_t q = 0; q < sp[p].size(); ++q) {
            batchParams[p][q] += sp[p][q];
          }
        }
      }
      const double scale = 1.0 / static_cast<double>(last - first);
      for (size_t p = 0; p < params.size(); ++p) {
        for (size_t q = 0; q < params[p].size(); ++q) {
          const double g = batchParams[p][q] * scale;
          double& eg = gradSq[p][q];
          double& ex = stepSq[p][q];
          eg = options.rho * eg + (1.0 - options.rho) * g * g;
          const double step = -std::sqrt(ex + options.eps) / std::sqrt(eg + options.eps) * g;
          ex = options.rho * ex + (1.0 - options.rho) * step * step;
          params[p][q] += options.learningRate * step;
        }
      }
    }
    report.epochLoss.push_back(epochLoss / static_cast<double>(corpus.size()));
    if (!heldOut.empty()) {
      report.epochAccuracy.push_back(evaluate(model, heldOut));
    }
  }
  if (!heldOut.empty()) {
    report.finalAccuracy = report.epochAccuracy.empty() ? evaluate(model, heldOut) : report.epochAccuracy.back();
  }
  report.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(model), std::move(report)};
}

double evaluate(const ToyModel& model, const Corpus& corpus, const Lexicon* lexicon, double lambda) {
  if (corpus.empty()) {
    return 0.0;
  }
  std::optional<LexiconTrie> trie;
  if (lexicon != nullptr) {
    trie = LexiconTrie::build(*lexicon, model.alphabet);
  }
  size_t correct = 0;
  for (const auto& s : corpus) {
    const EmissionSequence em = forwardModel(model, s.features);
    const Prediction p = trie ? predictLex(em, *trie, lambda) : predictFree(em);
    if (p.text == s.target) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

double diagonalPathFraction(const ToyModel& model, const Corpus& corpus) {
  if (corpus.empty()) {
    return 0.0;
  }
  size_t diagonal = 0;
  for (const auto& s : corpus) {
    const auto best = bestEditPath(forwardModel(model, s.features), s.target);
    const bool pure = std::all_of(best.path.begin(), best.path.end(), [](const EditOp& op) {
      return op.kind == EditKind::kConsume;
    });
    diagonal += pure ? 1 : 0;
  }
  return static_cast<double>(diagonal) / static_cast<double>(corpus.size());
}

Lexicon groundTruthLexicon(const Corpus& corpus, const Alphabet& alphabet) {
  std::vector<std::vector<int>> words;
  for (const auto& s : corpus) {
    const auto body = s.target.body();
    words.emplace_back(body.begin(), body.end());
  }
  return makeLexicon(std::move(words), alphabet);
}

} // namespace editprob::toy
