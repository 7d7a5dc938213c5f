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

#include <span>
#include <vector>

#include "editprob/types.hpp"

namespace editprob {

inline constexpr double kDefaultSumTolerance = 1e-6;

/**
 * Checks every distribution in `raw` (non-negative entries, sum within
 * `tolerance` of 1, length equal to the alphabet size) and returns a copy
 * in which each vector is rescaled to sum exactly to 1.
 */
EmissionSequence validateEmissions(
    EmissionSequence raw,
    double tolerance = kDefaultSumTolerance);

/**
 * ln p(op). Consume(i, j) = ln(rC_j y_j(T_i)); Delete(i, j) = 0 once T_i is
 * EOS and ln(rD_j) otherwise (including i = 0); Insert(i, j) = ln(rI_{j+1}
 * I_{j+1}(T_i)) for j < n and ln(finalIns(T_i)) for j = n.
 */
double opLogProb(
    const EmissionSequence& em,
    const TargetString& target,
    const EditOp& op);

/// Sum of op log-probabilities; the ops must chain contiguously from (0, 0).
double pathLogProb(
    const EmissionSequence& em,
    const TargetString& target,
    const EditPath& path);

/// Full forward grid of ln ep(T_{1:i}, y_{1:j}) in O(|T| n).
EpMatrix epForward(const EmissionSequence& em, const TargetString& target);

/// ln EP(T | emissions), the bottom-right cell of epForward.
double epScore(const EmissionSequence& em, const TargetString& target);

struct BestPath {
  EditPath path;
  double logProb;
};

/// Max-product path through the same grid. Ties prefer Consume, then Delete,
/// then Insert.
BestPath bestEditPath(const EmissionSequence& em, const TargetString& target);

/**
 * Log-domain operation tables for one emission sequence, laid out per symbol
 * so a grid row can be extended from its parent row in O(n). This is the
 * kernel shared by the forward pass, prefix scoring and the EP-Trie.
 */
class LogEmissions {
 public:
  explicit LogEmissions(const EmissionSequence& em);

  int frames() const {
    return n_;
  }
  int symbols() const {
    return symbols_;
  }
  int eos() const {
    return eos_;
  }
  int width() const {
    return n_ + 1;
  }

  /// ln(rC_j y_j(s)) at index j (index 0 is unused).
  std::span<const double> consume(int symbol) const {
    return {consume_.data() + static_cast<size_t>(symbol) * width(), static_cast<size_t>(width())};
  }
  /// Log-probability of inserting `symbol` at state column j, j = 0..n.
  std::span<const double> insert(int symbol) const {
    return {insert_.data() + static_cast<size_t>(symbol) * width(), static_cast<size_t>(width())};
  }
  /// ln(rD_j) at index j (index 0 is unused).
  std::span<const double> remove() const {
    return remove_;
  }
  /// ln(1 - rD_{j+1}) for j < n and 0 at j = n: the log-probability of
  /// leaving column j by anything other than a deletion.
  std::span<const double> leave() const {
    return leave_;
  }

  /// Row 0 of the grid: only deletions reach it.
  void initialRow(std::span<double> out) const;

  /// Row for prefix S + symbol given the row for S.
  void extendRow(std::span<const double> prev, int symbol, std::span<double> out) const;

  /// Same as extendRow but only returns the last cell, ln ep(S + symbol, y).
  double extendFinal(std::span<const double> prev, int symbol) const;

 private:
  int n_;
  int symbols_;
  int eos_;
  std::vector<double> consume_;
  std::vector<double> insert_;
  std::vector<double> remove_;
  std::vector<double> leave_;
};

} // namespace editprob
