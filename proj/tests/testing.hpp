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

#pragma once

// Instance generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "editprob/ep_core.hpp"
#include "editprob/ep_grad.hpp"
#include "editprob/rng.hpp"
#include "editprob/toy_lab.hpp"
#include "editprob/types.hpp"

namespace editprob::testing {

/// Positive vector with entries uniform in [floor, 1], normalized.
inline std::vector<double> randomDistribution(SplitMix64& rng, int size, double floor = 0.05) {
  std::vector<double> v(size);
  double sum = 0.0;
  for (double& x : v) {
    x = floor + (1.0 - floor) * rng.uniform();
    sum += x;
  }
  for (double& x : v) {
    x /= sum;
  }
  return v;
}

/// Alphabet of `symbols` entries: letters a.. then '#'.
inline Alphabet letterAlphabet(int symbols) {
  std::string letters;
  for (int k = 0; k + 1 < symbols; ++k) {
    letters.push_back(static_cast<char>('a' + k));
  }
  return Alphabet::fromChars(letters);
}

inline EmissionSequence randomEmissions(
    SplitMix64& rng,
    const Alphabet& alphabet,
    int frames,
    double floor = 0.05) {
  const int a = alphabet.size();
  EmissionSequence em{alphabet, {}, {}};
  for (int j = 0; j < frames; ++j) {
    const auto r = randomDistribution(rng, 3, floor);
    em.frames.push_back({randomDistribution(rng, a, floor), {r[0], r[1], r[2]}, randomDistribution(rng, a, floor)});
  }
  em.finalIns = randomDistribution(rng, a, floor);
  return em;
}

inline std::vector<int> randomBody(SplitMix64& rng, const Alphabet& alphabet, int length) {
  std::vector<int> body(length);
  for (int& c : body) {
    // letters occupy indices 0..size-2 in letterAlphabet, EOS is last
    int s;
    do {
      s = static_cast<int>(rng.below(alphabet.size()));
    } while (s == alphabet.eos());
    c = s;
  }
  return body;
}

inline TargetString randomTarget(SplitMix64& rng, const Alphabet& alphabet, int maxLen) {
  const int len = 1 + static_cast<int>(rng.below(maxLen));
  return TargetString::withEos(randomBody(rng, alphabet, len - 1), alphabet);
}

inline double relErr(double a, double b) {
  if (a == b) {
    return 0.0;
  }
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

/// Peaked distribution: `peak` on `index`, the rest spread evenly.
inline std::vector<double> peaked(int size, int index, double peak) {
  std::vector<double> v(size, (1.0 - peak) / (size - 1));
  v[index] = peak;
  return v;
}

/**
 * Six frames for "DOVE#" where the O has no frame of its own: frames read
 * D, V, E, # and then two superfluous frames; frame 2 signals a missing
 * character and its insertion distribution favours O.
 */
inline EmissionSequence missingCharacterInstance() {
  const Alphabet alphabet = Alphabet::fromChars("ADEOVY", '#');
  const int a = alphabet.size();
  auto idx = [&](const char* s) { return *alphabet.indexOf(s); };
  EmissionSequence em{alphabet, {}, {}};
  auto frame = [&](const char* top, AlignProbs r, const char* insTop) {
    em.frames.push_back({peaked(a, idx(top), 0.85), r, peaked(a, idx(insTop), 0.85)});
  };
  frame("D", {0.8, 0.1, 0.1}, "A");
  frame("V", {0.45, 0.5, 0.05}, "O");
  frame("E", {0.8, 0.1, 0.1}, "A");
  frame("#", {0.8, 0.1, 0.1}, "A");
  frame("Y", {0.3, 0.1, 0.6}, "A");
  frame("A", {0.3, 0.1, 0.6}, "A");
  em.finalIns = peaked(a, idx("#"), 0.85);
  return em;
}

/// One frame over {A, #}: r = (0.7, 0.2, 0.1), y(#) = 0.3, I(#) = 0.5,
/// finalIns(#) = 0.4. EP("#") = 0.2*0.5 + 0.1*0.4 + 0.7*0.3 = 0.35.
inline EmissionSequence oneFrameInstance() {
  EmissionSequence em{Alphabet::fromChars("A"), {}, {}};
  em.frames.push_back({{0.7, 0.3}, {0.7, 0.2, 0.1}, {0.5, 0.5}});
  em.finalIns = {0.6, 0.4};
  return em;
}

/// Random instance with rC forced to 1 on every frame.
inline EmissionSequence consumeOnly(SplitMix64& rng, const Alphabet& alphabet, int frames) {
  EmissionSequence em = randomEmissions(rng, alphabet, frames);
  for (auto& f : em.frames) {
    f.r = {1.0, 0.0, 0.0};
  }
  return em;
}

/// Visits every probability entry of `em` together with its gradient slot,
/// in a fixed order: per frame y, r (C, I, D), ins; then finalIns.
template <typename Grads, typename Fn>
void forEachEntry(EmissionSequence& em, Grads& grads, Fn&& fn) {
  for (size_t j = 0; j < em.frames.size(); ++j) {
    auto& f = em.frames[j];
    auto& g = grads.frames[j];
    for (size_t k = 0; k < f.y.size(); ++k) {
      fn(f.y[k], g.dY[k]);
    }
    fn(f.r.consume, g.dR.consume);
    fn(f.r.insert, g.dR.insert);
    fn(f.r.remove, g.dR.remove);
    for (size_t k = 0; k < f.ins.size(); ++k) {
      fn(f.ins[k], g.dIns[k]);
    }
  }
  for (size_t k = 0; k < em.finalIns.size(); ++k) {
    fn(em.finalIns[k], grads.dFinalIns[k]);
  }
}

/// Largest relative mismatch between epBackward and central differences of
/// -epScore over every entry. Differences below `floor` count as agreement.
inline double gradientMismatch(
    const EmissionSequence& em,
    const TargetString& target,
    double step = 1e-6,
    double floor = 1e-8) {
  const auto analytic = epBackward(em, target);
  EmissionSequence probe = em;
  auto grads = analytic.grads;
  double worst = 0.0;
  forEachEntry(probe, grads, [&](double& value, double& g) {
    const double saved = value;
    value = saved + step;
    const double up = -epScore(probe, target);
    value = saved - step;
    const double down = -epScore(probe, target);
    value = saved;
    const double fd = (up - down) / (2 * step);
    if (std::abs(fd - g) > floor) {
      worst = std::max(worst, relErr(fd, g));
    }
  });
  return worst;
}

/// Largest relative mismatch between sampleLoss weight gradients and central
/// differences, over `perArray` random coordinates of every parameter array.
inline double modelGradientMismatch(
    const toy::ToyModel& model,
    const toy::Sample& sample,
    toy::LossKind kind,
    SplitMix64& rng,
    int perArray = 20,
    double step = 1e-5,
    double floor = 1e-8,
    double* maxAbs = nullptr) {
  const auto analytic = sampleLoss(model, sample, kind);
  const auto grads = analytic.grads.parameters();
  toy::ToyModel probe = model;
  auto params = probe.parameters();
  double worst = 0.0;
  for (size_t a = 0; a < params.size(); ++a) {
    for (int k = 0; k < perArray; ++k) {
      const size_t idx = rng.below(params[a].size());
      const double saved = params[a][idx];
      params[a][idx] = saved + step;
      const double up = sampleLossValue(probe, sample, kind);
      params[a][idx] = saved - step;
      const double down = sampleLossValue(probe, sample, kind);
      params[a][idx] = saved;
      const double fd = (up - down) / (2 * step);
      if (maxAbs != nullptr) {
        *maxAbs = std::max(*maxAbs, std::abs(fd - grads[a][idx]));
      }
      if (std::abs(fd - grads[a][idx]) > floor) {
        worst = std::max(worst, relErr(fd, grads[a][idx]));
      }
    }
  }
  return worst;
}

} // namespace editprob::testing
