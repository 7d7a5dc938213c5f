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

#include <algorithm>
#include <cmath>

#include "editprob/types.hpp"

namespace editprob {

/// ln(x), with ln(0) mapped to -inf rather than raising.
inline double safeLog(double x) {
  return x > 0.0 ? std::log(x) : kLogZero;
}

inline double logAdd(double a, double b) {
  if (a < b) {
    std::swap(a, b);
  }
  if (a == kLogZero) {
    return kLogZero;
  }
  return a + std::log1p(std::exp(b - a));
}

inline double logAdd(double a, double b, double c) {
  const double m = std::max({a, b, c});
  if (m == kLogZero) {
    return kLogZero;
  }
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

} // namespace editprob
