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

#include <vector>

#include "editprob/types.hpp"

namespace editprob {

struct FrameGradients {
  std::vector<double> dY;
  AlignProbs dR{0.0, 0.0, 0.0};
  std::vector<double> dIns;
};

/**
 * Partial derivatives of a loss with respect to every probability entry of an
 * EmissionSequence. Entries are treated as free coordinates (no simplex
 * projection), so they match one-entry finite differences.
 */
struct EmissionGradients {
  std::vector<FrameGradients> frames;
  std::vector<double> dFinalIns;

  /// All-zero gradients shaped like `em`.
  static EmissionGradients zerosLike(const EmissionSequence& em);

  /// this += scale * other; shapes must match.
  void accumulate(const EmissionGradients& other, double scale = 1.0);
};

struct LossAndGradients {
  double loss;
  EmissionGradients grads;
};

/**
 * loss = -ln EP(T | em) and its exact gradient, from one forward and one
 * backward sweep over the edit grid. Throws ZeroProbability when EP = 0.
 */
LossAndGradients epBackward(const EmissionSequence& em, const TargetString& target);

struct BatchLoss {
  double loss = 0.0;
  std::vector<EmissionGradients> grads;
};

/// Sum of per-item losses; per-item gradients are kept separate.
BatchLoss batchLoss(
    const std::vector<EmissionSequence>& ems,
    const std::vector<TargetString>& targets);

/**
 * Maps probability-space gradients to gradients with respect to the softmax
 * scores that produced each distribution: dz_k = p_k (g_k - sum_m p_m g_m).
 * Shapes of the result mirror the input.
 */
EmissionGradients chainSoftmax(const EmissionGradients& grads, const EmissionSequence& em);

} // namespace editprob
