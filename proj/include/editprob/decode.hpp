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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "editprob/ep_core.hpp"
#include "editprob/types.hpp"

namespace editprob {

/// Words stored without EOS, duplicates removed, first-seen order kept.
struct Lexicon {
  std::vector<std::vector<int>> words;

  size_t size() const {
    return words.size();
  }
};

struct LexiconBuild {
  Lexicon lexicon;
  std::vector<std::string> skipped; // words with out-of-alphabet characters
};

/// Validates index words: empty words are dropped, EOS raises WordContainsEOS.
Lexicon makeLexicon(std::vector<std::vector<int>> words, const Alphabet& alphabet);

/**
 * Maps text words onto the alphabet. Words with characters outside the
 * alphabet are skipped and reported. With `foldCase`, a character that is
 * not in the alphabet is retried in lower then upper case.
 */
LexiconBuild makeLexicon(
    const std::vector<std::string>& words,
    const Alphabet& alphabet,
    bool foldCase = false);

/**
 * Prefix tree over lexicon words with EOS appended; every word ends in its own
 * EOS leaf. Depends only on the lexicon, so one instance serves any number of
 * emission sequences.
 */
class LexiconTrie {
 public:
  struct Node {
    int symbol = -1; // -1 at the root
    int parent = -1;
    int depth = 0;
    int word = -1; // lexicon index, set on EOS leaves only
    int firstChild = 0;
    int childCount = 0;
  };

  static LexiconTrie build(const Lexicon& lexicon, const Alphabet& alphabet);

  size_t size() const {
    return nodes_.size();
  }
  const Node& node(int id) const {
    return nodes_[id];
  }
  /// Child ids ordered by symbol index.
  std::span<const int> children(int id) const {
    const Node& n = nodes_[id];
    return {children_.data() + n.firstChild, static_cast<size_t>(n.childCount)};
  }
  int eos() const {
    return eos_;
  }
  /// EOS leaf for body + EOS, if that word is in the lexicon.
  std::optional<int> findWord(std::span<const int> body) const;
  /// Symbols on the path from the root, EOS excluded.
  std::vector<int> body(int id) const;

 private:
  std::vector<Node> nodes_;
  std::vector<int> children_;
  int eos_ = 0;
};

/// LexiconTrie plus, for every node with prefix S, the vector
/// v[j] = ln ep(S, y_{1:j}) for j = 0..n.
class EpTrie {
 public:
  EpTrie(LexiconTrie topology, const EmissionSequence& em);

  const LexiconTrie& topology() const {
    return topology_;
  }
  size_t size() const {
    return topology_.size();
  }
  int width() const {
    return width_;
  }
  std::span<const double> vector(int id) const {
    return {values_.data() + static_cast<size_t>(id) * width_, static_cast<size_t>(width_)};
  }

 private:
  LexiconTrie topology_;
  int width_;
  std::vector<double> values_;
};

/// Eager construction: one row extension per distinct prefix.
EpTrie buildTrie(const Lexicon& lexicon, const EmissionSequence& em);

enum class PredictionSource { kFree, kLexicon };

struct Prediction {
  TargetString text;
  double logScore; // ln EP(text)
  double weightedLogScore; // logScore plus ln(lambda) or ln(1 - lambda)
  PredictionSource source;
};

/**
 * Best EOS-free string under single-path probability. Insertions never help
 * an EOS-free path, so each frame independently either is deleted (when rD
 * beats rC times the best non-EOS y) or consumes its best non-EOS symbol.
 */
std::vector<int> greedyBaseString(const EmissionSequence& em);

/// ln EP(base_{1:i} + EOS) for i = 0..|base|, sharing prefix rows.
std::vector<double> scorePrefixCandidates(const EmissionSequence& em, std::span<const int> base);

/// Argmax of EP over the EOS-terminated prefixes of greedyBaseString.
Prediction predictFree(const EmissionSequence& em);

/**
 * Argmax over prefix candidates and lexicon words, lexicon members weighted
 * by lambda and the rest by 1 - lambda. Ties prefer lexicon members, then
 * shorter strings, then smaller symbol indices. lambda must lie in
 * [0.5, 1]; lambda = 1 requires a non-empty lexicon.
 *
 * This overload walks the trie lazily and skips every subtree whose score
 * bound cannot reach the current best, so it never changes the answer.
 */
Prediction predictLex(const EmissionSequence& em, const LexiconTrie& trie, double lambda);

/// Same decision read off a fully built EpTrie.
Prediction predictLex(const EmissionSequence& em, const EpTrie& trie, double lambda);

/// Convenience: builds the LexiconTrie and runs the lazy search.
Prediction predictLex(const EmissionSequence& em, const Lexicon& lexicon, double lambda);

/// Reference decision that scores every word with its own forward pass.
Prediction predictLexEnumerate(const EmissionSequence& em, const Lexicon& lexicon, double lambda);

struct SearchStats {
  size_t rowsComputed = 0;
  size_t subtreesPruned = 0;
};

/// predictLex over a LexiconTrie, reporting search effort.
Prediction predictLex(
    const EmissionSequence& em,
    const LexiconTrie& trie,
    double lambda,
    SearchStats* stats);

} // namespace editprob
