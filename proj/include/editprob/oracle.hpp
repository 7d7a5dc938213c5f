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

// Brute-force reference implementations for tests. Everything here works in
// linear probability space and never calls into the dynamic programs it is
// meant to check, except enumerateStrings, which scores candidates with
// epScore by definition.

#include <span>
#include <vector>

#include "editprob/types.hpp"

namespace editprob::oracle {

inline constexpr int kMaxPathTarget = 6;
inline constexpr int kMaxPathFrames = 6;
inline constexpr int kMaxStringSymbols = 4;
inline constexpr int kMaxStringFrames = 4;
inline constexpr int kMaxStringLength = 10;

struct EnumeratedPath {
  EditPath path;
  double probability;
};

struct PathEnumeration {
  std::vector<EnumeratedPath> paths;
  double total = 0.0;
};

/// Every edit path from ("", empty) to (T, y). Requires |T| <= 6, n <= 6.
PathEnumeration enumeratePaths(const EmissionSequence& em, const TargetString& target);

/// Same enumeration for an arbitrary symbol sequence, which may omit the
/// EOS. Deletions are free only after an EOS.
PathEnumeration enumerateSymbolPaths(const EmissionSequence& em, std::span<const int> symbols);

/// Linear-space probability of one operation, evaluated from the raw
/// distributions.
double opProbability(const EmissionSequence& em, std::span<const int> symbols, const EditOp& op);

struct ScoredString {
  TargetString text;
  double probability;
};

/// Every valid string of length <= maxLen with exp(epScore). Requires
/// |alphabet| <= 4, n <= 4, maxLen <= 10.
std::vector<ScoredString> enumerateStrings(const EmissionSequence& em, int maxLen);

/**
 * Sum of EP over all valid strings, from the backward recurrence over
 * not-yet-ended states. Equals 1 when every entry is strictly positive.
 * Zero entries are accepted; negative ones raise NonPositiveEntry.
 */
double totalMass(const EmissionSequence& em);

struct BestBody {
  std::vector<int> body;
  double probability;
};

/// Exhaustive argmax over EOS-free strings of length <= maxLen of the best
/// single path probability. Ties keep the shorter, then lexicographically
/// smaller string.
BestBody bestEosFreeString(const EmissionSequence& em, int maxLen);

} // namespace editprob::oracle
