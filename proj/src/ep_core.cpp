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

#include "editprob/ep_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "editprob/log_math.hpp"

namespace editprob {

namespace {

constexpr double kRoundingSlack = 1e-14;

template <typename Range>
void checkAndNormalize(Range& values, double tolerance, const std::string& what) {
  double sum = 0.0;
  for (double v : values) {
    if (v < 0.0) {
      throw EpError(ErrorCode::kNegativeEntry, what + " has a negative entry");
    }
    sum += v;
  }
  if (!(std::abs(sum - 1.0) <= tolerance)) {
    throw EpError(
        ErrorCode::kBadSum,
        what + " sums to " + std::to_string(sum) + ", not 1");
  }
  // Vectors already normalized up to summation rounding are left alone, so
  // validating twice (e.g. write then read) is the identity.
  if (std::abs(sum - 1.0) <= kRoundingSlack) {
    return;
  }
  for (double& v : values) {
    v /= sum;
  }
}

void checkLength(const std::vector<double>& v, int expected, const std::string& what) {
  if (static_cast<int>(v.size()) != expected) {
    throw EpError(
        ErrorCode::kDimensionMismatch,
        what + " has " + std::to_string(v.size()) + " entries, alphabet has " +
            std::to_string(expected));
  }
}

} // namespace

EmissionSequence validateEmissions(EmissionSequence raw, double tolerance) {
  const int a = raw.alphabet.size();
  for (size_t k = 0; k < raw.frames.size(); ++k) {
    auto& f = raw.frames[k];
    const std::string where = "frame " + std::to_string(k + 1);
    checkLength(f.y, a, where + " y");
    checkLength(f.ins, a, where + " ins");
    checkAndNormalize(f.y, tolerance, where + " y");
    std::array<double, 3> r{f.r.consume, f.r.insert, f.r.remove};
    checkAndNormalize(r, tolerance, where + " r");
    f.r = {r[0], r[1], r[2]};
    checkAndNormalize(f.ins, tolerance, where + " ins");
  }
  checkLength(raw.finalIns, a, "final_ins");
  checkAndNormalize(raw.finalIns, tolerance, "final_ins");
  return raw;
}

double opLogProb(
    const EmissionSequence& em,
    const TargetString& target,
    const EditOp& op) {
  const int n = em.length();
  const int len = target.size();
  const int eos = em.alphabet.eos();
  switch (op.kind) {
    case EditKind::kConsume:
      if (op.i < 1 || op.i > len || op.j < 1 || op.j > n) {
        break;
      }
      return safeLog(em.frame(op.j).r.consume * em.frame(op.j).y[target.at(op.i)]);
    case EditKind::kDelete:
      if (op.i < 0 || op.i > len || op.j < 1 || op.j > n) {
        break;
      }
      if (op.i >= 1 && target.at(op.i) == eos) {
        return 0.0;
      }
      return safeLog(em.frame(op.j).r.remove);
    case EditKind::kInsert:
      if (op.i < 1 || op.i > len || op.j < 0 || op.j > n) {
        break;
      }
      if (op.j < n) {
        const Frame& next = em.frame(op.j + 1);
        return safeLog(next.r.insert * next.ins[target.at(op.i)]);
      }
      return safeLog(em.finalIns[target.at(op.i)]);
  }
  throw EpError(
      ErrorCode::kIndexOutOfRange,
      std::string(editKindName(op.kind)) + "(" + std::to_string(op.i) + "," +
          std::to_string(op.j) + ") outside the edit grid");
}

double pathLogProb(
    const EmissionSequence& em,
    const TargetString& target,
    const EditPath& path) {
  int i = 0;
  int j = 0;
  double total = 0.0;
  for (const auto& op : path) {
    int fromI = op.i;
    int fromJ = op.j;
    if (op.kind != EditKind::kDelete) {
      --fromI;
    }
    if (op.kind != EditKind::kInsert) {
      --fromJ;
    }
    if (fromI != i || fromJ != j) {
      throw EpError(
          ErrorCode::kInvalidChain,
          std::string(editKindName(op.kind)) + "(" + std::to_string(op.i) + "," +
              std::to_string(op.j) + ") does not start at state (" +
              std::to_string(i) + "," + std::to_string(j) + ")");
    }
    total += opLogProb(em, target, op);
    i = op.i;
    j = op.j;
  }
  return total;
}

LogEmissions::LogEmissions(const EmissionSequence& em)
    : n_(em.length()),
      symbols_(em.alphabet.size()),
      eos_(em.alphabet.eos()),
      consume_(static_cast<size_t>(symbols_) * (n_ + 1), kLogZero),
      insert_(static_cast<size_t>(symbols_) * (n_ + 1), kLogZero),
      remove_(n_ + 1, kLogZero),
      leave_(n_ + 1, 0.0) {
  const size_t w = n_ + 1;
  for (int j = 1; j <= n_; ++j) {
    const Frame& f = em.frame(j);
    const double logC = safeLog(f.r.consume);
    const double logI = safeLog(f.r.insert);
    remove_[j] = safeLog(f.r.remove);
    leave_[j - 1] = safeLog(f.r.consume + f.r.insert);
    for (int s = 0; s < symbols_; ++s) {
      consume_[s * w + j] = logC + safeLog(f.y[s]);
      insert_[s * w + (j - 1)] = logI + safeLog(f.ins[s]);
    }
  }
  for (int s = 0; s < symbols_; ++s) {
    insert_[s * w + n_] = safeLog(em.finalIns[s]);
  }
}

void LogEmissions::initialRow(std::span<double> out) const {
  out[0] = 0.0;
  for (int j = 1; j <= n_; ++j) {
    out[j] = out[j - 1] + remove_[j];
  }
}

void LogEmissions::extendRow(
    std::span<const double> prev,
    int symbol,
    std::span<double> out) const {
  const auto cons = consume(symbol);
  const auto ins = insert(symbol);
  out[0] = prev[0] + ins[0];
  if (symbol == eos_) {
    // deletions after EOS have probability one
    for (int j = 1; j <= n_; ++j) {
      out[j] = logAdd(out[j - 1], prev[j] + ins[j], prev[j - 1] + cons[j]);
    }
  } else {
    for (int j = 1; j <= n_; ++j) {
      out[j] = logAdd(out[j - 1] + remove_[j], prev[j] + ins[j], prev[j - 1] + cons[j]);
    }
  }
}

double LogEmissions::extendFinal(std::span<const double> prev, int symbol) const {
  const auto cons = consume(symbol);
  const auto ins = insert(symbol);
  double cell = prev[0] + ins[0];
  if (symbol == eos_) {
    for (int j = 1; j <= n_; ++j) {
      cell = logAdd(cell, prev[j] + ins[j], prev[j - 1] + cons[j]);
    }
  } else {
    for (int j = 1; j <= n_; ++j) {
      cell = logAdd(cell + remove_[j], prev[j] + ins[j], prev[j - 1] + cons[j]);
    }
  }
  return cell;
}

EpMatrix epForward(const EmissionSequence& em, const TargetString& target) {
  const LogEmissions tables(em);
  EpMatrix m(target.size(), em.length());
  tables.initialRow(m.row(0));
  for (int i = 1; i <= target.size(); ++i) {
    tables.extendRow(m.row(i - 1), target.at(i), m.row(i));
  }
  return m;
}

double epScore(const EmissionSequence& em, const TargetString& target) {
  return epForward(em, target).final();
}

BestPath bestEditPath(const EmissionSequence& em, const TargetString& target) {
  const LogEmissions tables(em);
  const int len = target.size();
  const int n = em.length();
  EpMatrix best(len, n);
  std::vector<EditKind> back(static_cast<size_t>(len + 1) * (n + 1), EditKind::kConsume);
  auto backAt = [&](int i, int j) -> EditKind& {
    return back[static_cast<size_t>(i) * (n + 1) + j];
  };

  best.at(0, 0) = 0.0;
  for (int i = 0; i <= len; ++i) {
    const bool afterEos = i >= 1 && target.at(i) == tables.eos();
    const int symbol = i >= 1 ? target.at(i) : -1;
    for (int j = 0; j <= n; ++j) {
      if (i == 0 && j == 0) {
        continue;
      }
      // candidate order fixes the tie-break: consume, delete, insert
      double value = kLogZero;
      EditKind kind = EditKind::kConsume;
      bool have = false;
      auto offer = [&](EditKind k, double v) {
        if (!have || v > value) {
          value = v;
          kind = k;
          have = true;
        }
      };
      if (i >= 1 && j >= 1) {
        offer(EditKind::kConsume, best.at(i - 1, j - 1) + tables.consume(symbol)[j]);
      }
      if (j >= 1) {
        offer(EditKind::kDelete, best.at(i, j - 1) + (afterEos ? 0.0 : tables.remove()[j]));
      }
      if (i >= 1) {
        offer(EditKind::kInsert, best.at(i - 1, j) + tables.insert(symbol)[j]);
      }
      best.at(i, j) = value;
      backAt(i, j) = kind;
    }
  }

  EditPath path;
  int i = len;
  int j = n;
  while (i > 0 || j > 0) {
    const EditKind kind = backAt(i, j);
    path.push_back({kind, i, j});
    if (kind != EditKind::kDelete) {
      --i;
    }
    if (kind != EditKind::kInsert) {
      --j;
    }
  }
  std::reverse(path.begin(), path.end());
  return {std::move(path), best.final()};
}

} // namespace editprob
