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

#include "editprob/types.hpp"

#include <algorithm>
#include <set>

namespace editprob {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNegativeEntry:
      return "NegativeEntry";
    case ErrorCode::kBadSum:
      return "BadSum";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::kInvalidChain:
      return "InvalidChain";
    case ErrorCode::kZeroProbability:
      return "ZeroProbability";
    case ErrorCode::kTooLarge:
      return "TooLarge";
    case ErrorCode::kNonPositiveEntry:
      return "NonPositiveEntry";
    case ErrorCode::kWordContainsEos:
      return "WordContainsEOS";
    case ErrorCode::kLambdaOutOfRange:
      return "LambdaOutOfRange";
    case ErrorCode::kEmptyLexicon:
      return "EmptyLexicon";
    case ErrorCode::kDivergedLoss:
      return "DivergedLoss";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kParseError:
      return "ParseError";
  }
  return "Unknown";
}

const char* editKindName(EditKind kind) {
  switch (kind) {
    case EditKind::kConsume:
      return "consume";
    case EditKind::kDelete:
      return "delete";
    case EditKind::kInsert:
      return "insert";
  }
  return "?";
}

Alphabet::Alphabet(std::vector<std::string> symbols, int eosIndex)
    : symbols_(std::move(symbols)), eos_(eosIndex) {
  if (symbols_.size() < 2) {
    throw EpError(
        ErrorCode::kInvalidArgument,
        "alphabet needs at least one symbol besides EOS");
  }
  if (eos_ < 0 || eos_ >= size()) {
    throw EpError(ErrorCode::kIndexOutOfRange, "EOS index outside alphabet");
  }
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) {
      throw EpError(ErrorCode::kInvalidArgument, "empty alphabet symbol");
    }
    if (!seen.insert(s).second) {
      throw EpError(ErrorCode::kInvalidArgument, "duplicate symbol '" + s + "'");
    }
  }
}

Alphabet Alphabet::fromChars(std::string_view chars, char eos) {
  std::vector<std::string> symbols;
  for (char c : chars) {
    if (c != eos) {
      symbols.emplace_back(1, c);
    }
  }
  symbols.emplace_back(1, eos);
  const int eosIndex = static_cast<int>(symbols.size()) - 1;
  return Alphabet(std::move(symbols), eosIndex);
}

std::optional<int> Alphabet::indexOf(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) {
    return std::nullopt;
  }
  return static_cast<int>(it - symbols_.begin());
}

TargetString::TargetString(std::vector<int> indices, const Alphabet& alphabet)
    : indices_(std::move(indices)) {
  if (indices_.empty()) {
    throw EpError(ErrorCode::kInvalidArgument, "target string is empty");
  }
  for (size_t k = 0; k < indices_.size(); ++k) {
    const int s = indices_[k];
    if (s < 0 || s >= alphabet.size()) {
      throw EpError(ErrorCode::kIndexOutOfRange, "target symbol outside alphabet");
    }
    const bool last = k + 1 == indices_.size();
    if ((s == alphabet.eos()) != last) {
      throw EpError(
          ErrorCode::kInvalidArgument,
          "target must contain exactly one EOS, at the end");
    }
  }
}

TargetString TargetString::withEos(
    std::span<const int> body,
    const Alphabet& alphabet) {
  std::vector<int> indices(body.begin(), body.end());
  indices.push_back(alphabet.eos());
  return TargetString(std::move(indices), alphabet);
}

TargetString TargetString::parse(std::string_view text, const Alphabet& alphabet) {
  std::vector<int> indices;
  for (const auto& cp : splitCodePoints(text)) {
    auto idx = alphabet.indexOf(cp);
    if (!idx) {
      throw EpError(
          ErrorCode::kInvalidArgument,
          "character '" + cp + "' is not in the alphabet");
    }
    indices.push_back(*idx);
  }
  if (indices.empty() || indices.back() != alphabet.eos()) {
    indices.push_back(alphabet.eos());
  }
  return TargetString(std::move(indices), alphabet);
}

std::string TargetString::toString(const Alphabet& alphabet) const {
  std::string out;
  for (int s : indices_) {
    out += alphabet.symbol(s);
  }
  return out;
}

std::vector<std::string> splitCodePoints(std::string_view text) {
  std::vector<std::string> out;
  size_t k = 0;
  while (k < text.size()) {
    const auto lead = static_cast<unsigned char>(text[k]);
    size_t len = 1;
    if ((lead & 0xE0) == 0xC0) {
      len = 2;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4;
    }
    len = std::min(len, text.size() - k);
    out.emplace_back(text.substr(k, len));
    k += len;
  }
  return out;
}

} // namespace editprob
