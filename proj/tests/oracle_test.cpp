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

#include <doctest.h>

#include <cmath>

#include "editprob/ep_core.hpp"
#include "editprob/error.hpp"
#include "editprob/oracle.hpp"
#include "testing.hpp"

using namespace editprob;
using namespace editprob::testing;

TEST_SUITE("oracle") {

TEST_CASE("one frame, EOS target: three paths summing to 0.35") {
  const auto em = oneFrameInstance();
  const auto t = TargetString::withEos(std::vector<int>{}, em.alphabet);
  const auto all = oracle::enumeratePaths(em, t);
  REQUIRE(all.paths.size() == 3);
  CHECK(all.total == doctest::Approx(0.35).epsilon(1e-15));
  double listed = 0.0;
  for (const auto& p : all.paths) {
    listed += p.probability;
  }
  CHECK(std::abs(listed - all.total) <= 1e-12);
}

TEST_CASE("no frames, EOS target: a single insertion") {
  EmissionSequence em{Alphabet::fromChars("A"), {}, {0.6, 0.4}};
  const auto t = TargetString::withEos(std::vector<int>{}, em.alphabet);
  const auto all = oracle::enumeratePaths(em, t);
  REQUIRE(all.paths.size() == 1);
  CHECK(all.paths[0].path == EditPath{{EditKind::kInsert, 1, 0}});
  CHECK(all.total == doctest::Approx(0.4));
}

TEST_CASE("maxLen 1 lists only the EOS string") {
  SplitMix64 rng(41);
  const auto em = randomEmissions(rng, letterAlphabet(3), 2);
  const auto strings = oracle::enumerateStrings(em, 1);
  REQUIRE(strings.size() == 1);
  CHECK(strings[0].text.size() == 1);
  CHECK(strings[0].text.at(1) == em.alphabet.eos());
}

TEST_CASE("size guards are hard errors") {
  SplitMix64 rng(43);
  const auto alphabet = letterAlphabet(3);
  const auto big = randomEmissions(rng, alphabet, oracle::kMaxPathFrames + 1);
  const auto t = randomTarget(rng, alphabet, 2);
  CHECK_THROWS_AS(oracle::enumeratePaths(big, t), EpError);
  const auto wide = randomEmissions(rng, letterAlphabet(oracle::kMaxStringSymbols + 1), 1);
  CHECK_THROWS_AS(oracle::enumerateStrings(wide, 3), EpError);
  const auto small = randomEmissions(rng, alphabet, 1);
  CHECK_THROWS_AS(oracle::enumerateStrings(small, oracle::kMaxStringLength + 1), EpError);
}

TEST_CASE("path enumeration agrees with the log-space grid") {
  SplitMix64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const auto alphabet = letterAlphabet(2 + static_cast<int>(rng.below(3)));
    const auto em = randomEmissions(rng, alphabet, static_cast<int>(rng.below(5)));
    const auto t = randomTarget(rng, alphabet, 4);
    const auto all = oracle::enumeratePaths(em, t);
    CHECK(relErr(all.total, std::exp(epScore(em, t))) <= 1e-10);
    for (const auto& p : all.paths) {
      CHECK(relErr(p.probability, std::exp(pathLogProb(em, t, p.path))) <= 1e-12);
    }
  }
}

TEST_CASE("total mass: closed form with no frames") {
  for (double p : {0.05, 0.3, 0.9, 1.0}) {
    EmissionSequence em{Alphabet::fromChars("ab"), {}, {(1 - p) / 2, (1 - p) / 2, p}};
    CHECK(oracle::totalMass(em) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("total mass is one for strictly positive entries") {
  SplitMix64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto alphabet = letterAlphabet(2 + static_cast<int>(rng.below(2)));
    const auto em = randomEmissions(rng, alphabet, static_cast<int>(rng.below(4)));
    CHECK(std::abs(oracle::totalMass(em) - 1.0) <= 1e-9);
  }
}

TEST_CASE("total mass below one when strings cannot end after the frames") {
  SplitMix64 rng(59);
  const auto alphabet = letterAlphabet(3);
  auto em = randomEmissions(rng, alphabet, 2);
  em.finalIns.assign(alphabet.size(), 0.0);
  em.finalIns[0] = 1.0;
  for (auto& f : em.frames) {
    f.r.insert = 0.0;
    const double s = f.r.consume + f.r.remove;
    f.r.consume /= s;
    f.r.remove /= s;
  }
  const double mass = oracle::totalMass(em);
  CHECK(mass < 1.0);
  CHECK(mass > 0.0);
  // the truncated sums plateau at the mass
  double prev = 0.0;
  for (int len = 1; len <= 6; ++len) {
    double s = 0.0;
    for (const auto& x : oracle::enumerateStrings(em, len)) {
      s += x.probability;
    }
    CHECK(s >= prev - 1e-15);
    CHECK(s <= mass + 1e-12);
    prev = s;
  }
  CHECK(prev == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("negative entries are rejected by total mass") {
  auto em = oneFrameInstance();
  em.frames[0].y = {1.2, -0.2};
  CHECK_THROWS_AS(oracle::totalMass(em), EpError);
}

TEST_CASE("truncated string sums are monotone and bounded") {
  SplitMix64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const auto em = randomEmissions(rng, letterAlphabet(3), 1 + static_cast<int>(rng.below(3)));
    const double mass = oracle::totalMass(em);
    double prev = 0.0;
    for (int len = 1; len <= 7; ++len) {
      double s = 0.0;
      for (const auto& x : oracle::enumerateStrings(em, len)) {
        s += x.probability;
      }
      CHECK(s >= prev);
      CHECK(s <= mass + 1e-12);
      prev = s;
    }
  }
}

TEST_CASE("best EOS-free string on a deletion-heavy instance is empty") {
  EmissionSequence em{Alphabet::fromChars("ab"), {}, {}};
  for (int j = 0; j < 3; ++j) {
    em.frames.push_back({{0.5, 0.3, 0.2}, {0.05, 0.05, 0.9}, {0.4, 0.4, 0.2}});
  }
  em.finalIns = {0.3, 0.3, 0.4};
  const auto best = oracle::bestEosFreeString(em, 4);
  CHECK(best.body.empty());
  CHECK(best.probability == doctest::Approx(0.9 * 0.9 * 0.9));
}

} // TEST_SUITE
