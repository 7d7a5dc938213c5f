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

#include "editprob/decode.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "editprob/log_math.hpp"

namespace editprob {

namespace {

// A subtree is skipped only when its bound is below the incumbent by more
// than this (log domain), which absorbs rounding in the bound itself.
constexpr double kPruneMargin = 1e-7;

struct Candidate {
  std::vector<int> body;
  double ep = kLogZero;
  bool inLexicon = false;
  double weighted = kLogZero;
  bool valid = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) {
    return a.valid;
  }
  if (a.weighted != b.weighted) {
    return a.weighted > b.weighted;
  }
  if (a.inLexicon != b.inLexicon) {
    return a.inLexicon;
  }
  if (a.body.size() != b.body.size()) {
    return a.body.size() < b.body.size();
  }
  return std::lexicographical_compare(a.body.begin(), a.body.end(), b.body.begin(), b.body.end());
}

struct Weights {
  double lexicon;
  double free;
};

Weights checkLambda(double lambda) {
  if (!(lambda >= 0.5 && lambda <= 1.0)) {
    throw EpError(ErrorCode::kLambdaOutOfRange, "lambda must lie in [0.5, 1]");
  }
  return {safeLog(lambda), safeLog(1.0 - lambda)};
}

Prediction toPrediction(const Candidate& c, const Alphabet& alphabet) {
  return {
      TargetString::withEos(c.body, alphabet),
      c.ep,
      c.weighted,
      c.inLexicon ? PredictionSource::kLexicon : PredictionSource::kFree};
}

// Best member of the prefix candidate set; `isWord` reports lexicon membership.
template <typename IsWord>
Candidate bestPrefixCandidate(
    const EmissionSequence& em,
    const Weights& w,
    IsWord&& isWord) {
  const auto base = greedyBaseString(em);
  const auto scores = scorePrefixCandidates(em, base);
  Candidate best;
  for (size_t i = 0; i < scores.size(); ++i) {
    Candidate c;
    c.body.assign(base.begin(), base.begin() + i);
    c.ep = scores[i];
    c.inLexicon = isWord(std::span<const int>(c.body));
    c.weighted = scores[i] + (c.inLexicon ? w.lexicon : w.free);
    c.valid = true;
    if (better(c, best)) {
      best = std::move(c);
    }
  }
  return best;
}

void offerWord(Candidate& best, std::span<const int> body, double ep, const Weights& w) {
  const double weighted = ep + w.lexicon;
  if (best.valid && weighted < best.weighted) {
    return;
  }
  Candidate c;
  c.body.assign(body.begin(), body.end());
  c.ep = ep;
  c.inLexicon = true;
  c.weighted = weighted;
  c.valid = true;
  if (better(c, best)) {
    best = std::move(c);
  }
}

void requireLexicon(size_t size, double lambda) {
  if (size == 0 && lambda == 1.0) {
    throw EpError(ErrorCode::kEmptyLexicon, "lambda = 1 needs a non-empty lexicon");
  }
}

} // namespace

Lexicon makeLexicon(std::vector<std::vector<int>> words, const Alphabet& alphabet) {
  Lexicon lex;
  std::set<std::vector<int>> seen;
  for (auto& w : words) {
    if (w.empty()) {
      continue;
    }
    for (int s : w) {
      if (s == alphabet.eos()) {
        throw EpError(ErrorCode::kWordContainsEos, "lexicon word contains the EOS symbol");
      }
      if (s < 0 || s >= alphabet.size()) {
        throw EpError(ErrorCode::kIndexOutOfRange, "lexicon symbol outside alphabet");
      }
    }
    if (seen.insert(w).second) {
      lex.words.push_back(std::move(w));
    }
  }
  return lex;
}

LexiconBuild makeLexicon(
    const std::vector<std::string>& words,
    const Alphabet& alphabet,
    bool foldCase) {
  LexiconBuild out;
  std::vector<std::vector<int>> mapped;
  for (const auto& word : words) {
    std::vector<int> indices;
    bool ok = true;
    for (const auto& cp : splitCodePoints(word)) {
      auto idx = alphabet.indexOf(cp);
      if (!idx && foldCase && cp.size() == 1) {
        const auto c = static_cast<unsigned char>(cp[0]);
        idx = alphabet.indexOf(std::string(1, static_cast<char>(std::tolower(c))));
        if (!idx) {
          idx = alphabet.indexOf(std::string(1, static_cast<char>(std::toupper(c))));
        }
      }
      if (!idx) {
        ok = false;
        break;
      }
      if (*idx == alphabet.eos()) {
        throw EpError(ErrorCode::kWordContainsEos, "lexicon word '" + word + "' contains EOS");
      }
      indices.push_back(*idx);
    }
    if (ok) {
      mapped.push_back(std::move(indices));
    } else {
      out.skipped.push_back(word);
    }
  }
  out.lexicon = makeLexicon(std::move(mapped), alphabet);
  return out;
}

LexiconTrie LexiconTrie::build(const Lexicon& lexicon, const Alphabet& alphabet) {
  struct Building {
    Node node;
    std::map<int, int> kids;
  };
  std::vector<Building> tmp(1);
  for (size_t w = 0; w < lexicon.words.size(); ++w) {
    int cur = 0;
    auto descend = [&](int symbol) {
      auto it = tmp[cur].kids.find(symbol);
      if (it != tmp[cur].kids.end()) {
        cur = it->second;
        return;
      }
      const int id = static_cast<int>(tmp.size());
      Building b;
      b.node.symbol = symbol;
      b.node.parent = cur;
      b.node.depth = tmp[cur].node.depth + 1;
      tmp[cur].kids.emplace(symbol, id);
      tmp.push_back(std::move(b));
      cur = id;
    };
    for (int s : lexicon.words[w]) {
      if (s == alphabet.eos()) {
        throw EpError(ErrorCode::kWordContainsEos, "lexicon word contains the EOS symbol");
      }
      descend(s);
    }
    descend(alphabet.eos());
    if (tmp[cur].node.word < 0) {
      tmp[cur].node.word = static_cast<int>(w);
    }
  }

  LexiconTrie trie;
  trie.eos_ = alphabet.eos();
  trie.nodes_.reserve(tmp.size());
  trie.children_.reserve(tmp.size());
  for (auto& b : tmp) {
    b.node.firstChild = static_cast<int>(trie.children_.size());
    b.node.childCount = static_cast<int>(b.kids.size());
    for (const auto& [symbol, id] : b.kids) {
      trie.children_.push_back(id);
    }
    trie.nodes_.push_back(b.node);
  }
  return trie;
}

std::optional<int> LexiconTrie::findWord(std::span<const int> body) const {
  int cur = 0;
  auto step = [&](int symbol) {
    for (int kid : children(cur)) {
      if (nodes_[kid].symbol == symbol) {
        cur = kid;
        return true;
      }
    }
    return false;
  };
  for (int s : body) {
    if (!step(s)) {
      return std::nullopt;
    }
  }
  if (!step(eos_)) {
    return std::nullopt;
  }
  return cur;
}

std::vector<int> LexiconTrie::body(int id) const {
  std::vector<int> out;
  for (int cur = id; cur > 0; cur = nodes_[cur].parent) {
    if (nodes_[cur].symbol != eos_) {
      out.push_back(nodes_[cur].symbol);
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

EpTrie::EpTrie(LexiconTrie topology, const EmissionSequence& em)
    : topology_(std::move(topology)), width_(em.length() + 1) {
  if (topology_.eos() != em.alphabet.eos()) {
    throw EpError(ErrorCode::kDimensionMismatch, "trie and emissions disagree on EOS");
  }
  const LogEmissions tables(em);
  values_.assign(topology_.size() * width_, kLogZero);
  auto row = [&](int id) {
    return std::span<double>(values_.data() + static_cast<size_t>(id) * width_, width_);
  };
  tables.initialRow(row(0));
  // parents are created before their children
  for (int id = 1; id < static_cast<int>(topology_.size()); ++id) {
    const auto& node = topology_.node(id);
    tables.extendRow(row(node.parent), node.symbol, row(id));
  }
}

EpTrie buildTrie(const Lexicon& lexicon, const EmissionSequence& em) {
  return EpTrie(LexiconTrie::build(lexicon, em.alphabet), em);
}

std::vector<int> greedyBaseString(const EmissionSequence& em) {
  const int eos = em.alphabet.eos();
  std::vector<int> out;
  for (const auto& f : em.frames) {
    int bestSymbol = -1;
    double bestProb = -1.0;
    for (int c = 0; c < static_cast<int>(f.y.size()); ++c) {
      if (c != eos && f.y[c] > bestProb) {
        bestProb = f.y[c];
        bestSymbol = c;
      }
    }
    if (!(f.r.remove > f.r.consume * bestProb)) {
      out.push_back(bestSymbol);
    }
  }
  return out;
}

std::vector<double> scorePrefixCandidates(const EmissionSequence& em, std::span<const int> base) {
  const LogEmissions tables(em);
  const int w = tables.width();
  std::vector<double> prev(w);
  std::vector<double> next(w);
  tables.initialRow(prev);
  std::vector<double> scores;
  scores.reserve(base.size() + 1);
  for (size_t i = 0;; ++i) {
    scores.push_back(tables.extendFinal(prev, tables.eos()));
    if (i == base.size()) {
      break;
    }
    tables.extendRow(prev, base[i], next);
    std::swap(prev, next);
  }
  return scores;
}

Prediction predictFree(const EmissionSequence& em) {
  const Weights even{0.0, 0.0};
  const auto best = bestPrefixCandidate(em, even, [](std::span<const int>) { return false; });
  return toPrediction(best, em.alphabet);
}

Prediction predictLex(
    const EmissionSequence& em,
    const LexiconTrie& trie,
    double lambda,
    SearchStats* stats) {
  const Weights w = checkLambda(lambda);
  if (trie.eos() != em.alphabet.eos()) {
    throw EpError(ErrorCode::kDimensionMismatch, "trie and emissions disagree on EOS");
  }
  requireLexicon(trie.size() > 1 ? 1 : 0, lambda);

  Candidate best = bestPrefixCandidate(
      em, w, [&](std::span<const int> body) { return trie.findWord(body).has_value(); });

  const LogEmissions tables(em);
  const int width = tables.width();
  const auto leave = tables.leave();
  SearchStats local;

  int maxDepth = 0;
  for (size_t id = 0; id < trie.size(); ++id) {
    maxDepth = std::max(maxDepth, trie.node(static_cast<int>(id)).depth);
  }
  std::vector<std::vector<double>> arena(maxDepth + 1);
  std::vector<std::vector<std::pair<double, int>>> order(maxDepth + 1);
  std::vector<double> root(width);
  tables.initialRow(root);

  auto visit = [&](auto&& self, int id, std::span<const double> row, int depth) -> void {
    const auto kids = trie.children(id);
    auto& buf = arena[depth];
    buf.resize(kids.size() * width);
    auto& ranked = order[depth];
    ranked.clear();
    for (size_t k = 0; k < kids.size(); ++k) {
      const auto& child = trie.node(kids[k]);
      if (child.symbol == tables.eos()) {
        const double ep = tables.extendFinal(row, tables.eos());
        ++local.rowsComputed;
        if (!best.valid || ep + w.lexicon >= best.weighted) {
          offerWord(best, trie.body(kids[k]), ep, w);
        }
        continue;
      }
      std::span<double> childRow(buf.data() + k * width, width);
      tables.extendRow(row, child.symbol, childRow);
      ++local.rowsComputed;
      // every word below has ep <= sum_j ep(S, y_{1:j}) P(leave column j)
      double bound = kLogZero;
      for (int j = 0; j < width; ++j) {
        bound = logAdd(bound, childRow[j] + leave[j]);
      }
      ranked.emplace_back(bound, static_cast<int>(k));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first > b.first;
    });
    for (const auto& [bound, k] : ranked) {
      if (best.valid && bound + w.lexicon < best.weighted - kPruneMargin) {
        ++local.subtreesPruned;
        continue;
      }
      self(self, kids[k], std::span<const double>(buf.data() + k * width, width), depth + 1);
    }
  };
  visit(visit, 0, root, 0);

  if (stats != nullptr) {
    *stats = local;
  }
  return toPrediction(best, em.alphabet);
}

Prediction predictLex(const EmissionSequence& em, const LexiconTrie& trie, double lambda) {
  return predictLex(em, trie, lambda, nullptr);
}

Prediction predictLex(const EmissionSequence& em, const EpTrie& trie, double lambda) {
  const Weights w = checkLambda(lambda);
  const auto& topo = trie.topology();
  requireLexicon(topo.size() > 1 ? 1 : 0, lambda);
  Candidate best = bestPrefixCandidate(
      em, w, [&](std::span<const int> body) { return topo.findWord(body).has_value(); });
  for (int id = 1; id < static_cast<int>(trie.size()); ++id) {
    if (topo.node(id).word >= 0) {
      offerWord(best, topo.body(id), trie.vector(id).back(), w);
    }
  }
  return toPrediction(best, em.alphabet);
}

Prediction predictLex(const EmissionSequence& em, const Lexicon& lexicon, double lambda) {
  checkLambda(lambda);
  return predictLex(em, LexiconTrie::build(lexicon, em.alphabet), lambda, nullptr);
}

Prediction predictLexEnumerate(const EmissionSequence& em, const Lexicon& lexicon, double lambda) {
  const Weights w = checkLambda(lambda);
  requireLexicon(lexicon.size(), lambda);
  const auto base = greedyBaseString(em);
  std::vector<bool> prefixInLexicon(base.size() + 1, false);

  const LogEmissions tables(em);
  const int width = tables.width();
  std::vector<double> prev(width);
  std::vector<double> next(width);
  Candidate bestWord;
  for (const auto& word : lexicon.words) {
    if (word.size() <= base.size() && std::equal(word.begin(), word.end(), base.begin())) {
      prefixInLexicon[word.size()] = true;
    }
    tables.initialRow(prev);
    for (int s : word) {
      tables.extendRow(prev, s, next);
      std::swap(prev, next);
    }
    offerWord(bestWord, word, tables.extendFinal(prev, tables.eos()), w);
  }

  const auto scores = scorePrefixCandidates(em, base);
  Candidate best = bestWord;
  for (size_t i = 0; i < scores.size(); ++i) {
    Candidate c;
    c.body.assign(base.begin(), base.begin() + i);
    c.ep = scores[i];
    c.inLexicon = prefixInLexicon[i];
    c.weighted = scores[i] + (c.inLexicon ? w.lexicon : w.free);
    c.valid = true;
    if (better(c, best)) {
      best = std::move(c);
    }
  }
  return toPrediction(best, em.alphabet);
}

} // namespace editprob
