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

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "editprob/error.hpp"

namespace editprob {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/**
 * Ordered symbol set. Exactly one symbol is the end-of-sequence marker; every
 * valid target string ends with it and contains it nowhere else.
 */
class Alphabet {
 public:
  Alphabet(std::vector<std::string> symbols, int eosIndex);

  /// Builds an alphabet from single characters, e.g. ("abc", '#') gives
  /// {a, b, c, #} with EOS last.
  static Alphabet fromChars(std::string_view chars, char eos = '#');

  int size() const {
    return static_cast<int>(symbols_.size());
  }
  int eos() const {
    return eos_;
  }
  const std::string& symbol(int index) const {
    return symbols_.at(index);
  }
  const std::vector<std::string>& symbols() const {
    return symbols_;
  }
  std::optional<int> indexOf(std::string_view symbol) const;

  bool operator==(const Alphabet& other) const = default;

 private:
  std::vector<std::string> symbols_;
  int eos_;
};

/// A symbol sequence terminated by exactly one EOS.
class TargetString {
 public:
  TargetString(std::vector<int> indices, const Alphabet& alphabet);

  /// Appends EOS to an EOS-free symbol sequence.
  static TargetString withEos(std::span<const int> body, const Alphabet& alphabet);

  /// Parses text symbol by symbol (UTF-8 code points). A trailing EOS is
  /// accepted; otherwise one is appended.
  static TargetString parse(std::string_view text, const Alphabet& alphabet);

  int size() const {
    return static_cast<int>(indices_.size());
  }
  /// 1-based access matching the usual T_i notation.
  int at(int i) const {
    return indices_[i - 1];
  }
  const std::vector<int>& indices() const {
    return indices_;
  }
  /// Symbols without the trailing EOS.
  std::span<const int> body() const {
    return {indices_.data(), indices_.size() - 1};
  }
  std::string toString(const Alphabet& alphabet) const;

  bool operator==(const TargetString& other) const = default;

 private:
  std::vector<int> indices_;
};

/// Splits UTF-8 text into code points, each returned as its own string.
std::vector<std::string> splitCodePoints(std::string_view text);

/// Consume / insert / delete split of a frame, in (C, I, D) order.
struct AlignProbs {
  double consume = 1.0;
  double insert = 0.0;
  double remove = 0.0;

  double operator[](int k) const {
    return k == 0 ? consume : (k == 1 ? insert : remove);
  }
  double& operator[](int k) {
    return k == 0 ? consume : (k == 1 ? insert : remove);
  }
};

struct Frame {
  std::vector<double> y; // output distribution
  AlignProbs r; // alignment distribution
  std::vector<double> ins; // which symbol is missing before this frame
};

/**
 * Per-frame emissions plus the insertion distribution that applies once all
 * frames have been consumed or deleted. The sole input to all EP math.
 */
struct EmissionSequence {
  Alphabet alphabet;
  std::vector<Frame> frames;
  std::vector<double> finalIns;

  int length() const {
    return static_cast<int>(frames.size());
  }
  /// 1-based frame access.
  const Frame& frame(int j) const {
    return frames[j - 1];
  }
};

enum class EditKind { kConsume, kDelete, kInsert };

const char* editKindName(EditKind kind);

/**
 * One edit operation, labelled by the state it produces: Consume(i, j) moves
 * (i-1, j-1) to (i, j), Delete(i, j) moves (i, j-1) to (i, j) and
 * Insert(i, j) moves (i-1, j) to (i, j).
 */
struct EditOp {
  EditKind kind;
  int i;
  int j;

  bool operator==(const EditOp& other) const = default;
};

using EditPath = std::vector<EditOp>;

/// (|T|+1) x (n+1) grid of ln ep(T_{1:i}, y_{1:j}).
class EpMatrix {
 public:
  EpMatrix(int targetLen, int frameLen)
      : targetLen_(targetLen),
        frameLen_(frameLen),
        values_(static_cast<size_t>(targetLen + 1) * (frameLen + 1), kLogZero) {}

  int targetLen() const {
    return targetLen_;
  }
  int frameLen() const {
    return frameLen_;
  }
  double at(int i, int j) const {
    return values_[index(i, j)];
  }
  double& at(int i, int j) {
    return values_[index(i, j)];
  }
  std::span<const double> row(int i) const {
    return {values_.data() + index(i, 0), static_cast<size_t>(frameLen_ + 1)};
  }
  std::span<double> row(int i) {
    return {values_.data() + index(i, 0), static_cast<size_t>(frameLen_ + 1)};
  }
  double final() const {
    return at(targetLen_, frameLen_);
  }

 private:
  size_t index(int i, int j) const {
    return static_cast<size_t>(i) * (frameLen_ + 1) + j;
  }

  int targetLen_;
  int frameLen_;
  std::vector<double> values_;
};

} // namespace editprob
