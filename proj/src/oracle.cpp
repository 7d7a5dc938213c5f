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

#include "editprob/oracle.hpp"

#include <cmath>
#include <string>

#include "editprob/ep_core.hpp"

namespace editprob::oracle {

namespace {

void requireSize(bool ok, const std::string& what) {
  if (!ok) {
    throw EpError(ErrorCode::kTooLarge, what);
  }
}

struct PathWalker {
  const EmissionSequence& em;
  std::span<const int> symbols;
  int len;
  int n;
  EditPath current;
  PathEnumeration out;

  void walk(int i, int j, double prob) {
    if (i == len && j == n) {
      out.paths.push_back({current, prob});
      out.total += prob;
      return;
    }
    if (i < len && j < n) {
      step({EditKind::kConsume, i + 1, j + 1}, prob);
    }
    if (j < n) {
      step({EditKind::kDelete, i, j + 1}, prob);
    }
    if (i < len) {
      step({EditKind::kInsert, i + 1, j}, prob);
    }
  }

  void step(const EditOp& op, double prob) {
    current.push_back(op);
    walk(op.i, op.j, prob * opProbability(em, symbols, op));
    current.pop_back();
  }
};

} // namespace

double opProbability(const EmissionSequence& em, std::span<const int> symbols, const EditOp& op) {
  const int n = em.length();
  const int eos = em.alphabet.eos();
  switch (op.kind) {
    case EditKind::kConsume: {
      const Frame& f = em.frames[op.j - 1];
      return f.r.consume * f.y[symbols[op.i - 1]];
    }
    case EditKind::kDelete:
      if (op.i >= 1 && symbols[op.i - 1] == eos) {
        return 1.0;
      }
      return em.frames[op.j - 1].r.remove;
    case EditKind::kInsert:
      if (op.j < n) {
        const Frame& f = em.frames[op.j];
        return f.r.insert * f.ins[symbols[op.i - 1]];
      }
      return em.finalIns[symbols[op.i - 1]];
  }
  return 0.0;
}

PathEnumeration enumerateSymbolPaths(const EmissionSequence& em, std::span<const int> symbols) {
  requireSize(
      static_cast<int>(symbols.size()) <= kMaxPathTarget && em.length() <= kMaxPathFrames,
      "path enumeration limited to |T| <= 6 and n <= 6");
  PathWalker walker{em, symbols, static_cast<int>(symbols.size()), em.length(), {}, {}};
  walker.walk(0, 0, 1.0);
  return std::move(walker.out);
}

PathEnumeration enumeratePaths(const EmissionSequence& em, const TargetString& target) {
  return enumerateSymbolPaths(em, target.indices());
}

std::vector<ScoredString> enumerateStrings(const EmissionSequence& em, int maxLen) {
  const Alphabet& alphabet = em.alphabet;
  requireSize(
      alphabet.size() <= kMaxStringSymbols && em.length() <= kMaxStringFrames &&
          maxLen <= kMaxStringLength,
      "string enumeration limited to |alphabet| <= 4, n <= 4, maxLen <= 10");

  std::vector<int> letters;
  for (int s = 0; s < alphabet.size(); ++s) {
    if (s != alphabet.eos()) {
      letters.push_back(s);
    }
  }
  std::vector<ScoredString> out;
  std::vector<int> body;
  // odometer over bodies of each length, shortest first
  for (int bodyLen = 0; bodyLen < maxLen; ++bodyLen) {
    std::vector<size_t> digits(bodyLen, 0);
    while (true) {
      body.clear();
      for (size_t d : digits) {
        body.push_back(letters[d]);
      }
      auto text = TargetString::withEos(body, alphabet);
      const double p = std::exp(epScore(em, text));
      out.push_back({std::move(text), p});
      int k = bodyLen - 1;
      while (k >= 0 && ++digits[k] == letters.size()) {
        digits[k] = 0;
        --k;
      }
      if (k < 0) {
        break;
      }
    }
  }
  return out;
}

double totalMass(const EmissionSequence& em) {
  auto check = [](std::span<const double> v) {
    for (double x : v) {
      if (!(x >= 0.0)) {
        throw EpError(ErrorCode::kNonPositiveEntry, "distribution entry is negative");
      }
    }
  };
  for (const auto& f : em.frames) {
    check(f.y);
    check(f.ins);
    check(std::array<double, 3>{f.r.consume, f.r.insert, f.r.remove});
  }
  check(em.finalIns);

  const int eos = em.alphabet.eos();
  const int n = em.length();
  // mass[j]: probability of eventually emitting EOS from a not-yet-ended
  // state that has used j frames. Stuck insertion loops contribute 0.
  double mass = em.finalIns[eos] > 0.0 ? 1.0 : 0.0;
  for (int j = n - 1; j >= 0; --j) {
    const Frame& f = em.frames[j];
    const double loop = f.r.insert * (1.0 - f.ins[eos]);
    const double rest = f.r.insert * f.ins[eos] + f.r.remove * mass +
        f.r.consume * (f.y[eos] + (1.0 - f.y[eos]) * mass);
    const double denom = 1.0 - loop;
    mass = denom > 0.0 ? rest / denom : 0.0;
  }
  return mass;
}

BestBody bestEosFreeString(const EmissionSequence& em, int maxLen) {
  const Alphabet& alphabet = em.alphabet;
  std::vector<int> letters;
  for (int s = 0; s < alphabet.size(); ++s) {
    if (s != alphabet.eos()) {
      letters.push_back(s);
    }
  }
  BestBody best{{}, -1.0};
  std::vector<int> body;
  for (int len = 0; len <= maxLen; ++len) {
    std::vector<size_t> digits(len, 0);
    while (true) {
      body.clear();
      for (size_t d : digits) {
        body.push_back(letters[d]);
      }
      double top = 0.0;
      for (const auto& p : enumerateSymbolPaths(em, body).paths) {
        top = std::max(top, p.probability);
      }
      if (top > best.probability) {
        best = {body, top};
      }
      int k = len - 1;
      while (k >= 0 && ++digits[k] == letters.size()) {
        digits[k] = 0;
        --k;
      }
      if (k < 0) {
        break;
      }
    }
  }
  return best;
}

} // namespace editprob::oracle
