/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The fathorse Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fathorse/fat_cantor.hpp"
#include "fathorse/rng.hpp"

namespace {

using namespace fathorse;
using cantor::BetaSequence;
using cantor::CantorConstruction;
using cantor::Word;

// 40-digit references (tests/oracles/constants.py), c = 1.8 and p = 2.
constexpr double kLimit = 0.081921495018284400434;
constexpr double kLevel20 = 0.091254257903164672862;

CantorConstruction k18() { return cantor::make_construction(LorenzBranchMap::from_coefficient(1.8), 2.0); }

Word random_word(SplitMix64& rng, int n) {
  return Word::from_index(n == 0 ? 0 : rng.next() & ((std::uint64_t{1} << n) - 1), n);
}

TEST(Word, StringRoundTripAndOps) {
  const auto w = Word::from_string("0110");
  EXPECT_EQ(w.size(), 4);
  EXPECT_EQ(w.to_string(), "0110");
  EXPECT_EQ(w.letter(0), 0);
  EXPECT_EQ(w.letter(1), 1);
  EXPECT_EQ(w.child(1).to_string(), "01101");
  EXPECT_EQ(w.prefix(2).to_string(), "01");
  EXPECT_EQ(w.tail().to_string(), "110");
  EXPECT_EQ(w.flipped().to_string(), "1001");
  EXPECT_TRUE(Word().empty());
  EXPECT_EQ(Word().tail(), Word());
  EXPECT_EQ(Word::from_index(0b110, 3).to_string(), "011");
}

TEST(Word, Errors) {
  EXPECT_THROW(Word::from_string("012"), DomainError);
  EXPECT_THROW(Word::from_string(std::string(63, '0')), SizeGuardError);
  EXPECT_NO_THROW(Word::from_string(std::string(62, '1')));
}

TEST(BetaSequence, Values) {
  const BetaSequence beta(0.1, 2.0);
  EXPECT_EQ(beta.value(0), 0.2);
  EXPECT_DOUBLE_EQ(beta.value(3), 0.2 / 16);
  EXPECT_NEAR(beta.total(), 0.2 * std::numbers::pi * std::numbers::pi / 6.0, 1e-16);
  EXPECT_EQ(beta.partial_sum(0), 0.0);
  EXPECT_DOUBLE_EQ(beta.partial_sum(2), 0.2 + 0.05);
}

TEST(BetaSequence, RatioIncreasesToOne) {
  const BetaSequence beta(0.1, 2.5);
  double prev = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double r = beta.ratio(n);
    EXPECT_NEAR(r, beta.value(n + 1) / beta.value(n), 1e-15);
    EXPECT_GT(r, prev);
    EXPECT_LT(r, 1.0);
    prev = r;
  }
  EXPECT_GT(prev, 0.98);
}

TEST(BetaSequence, TailBoundIsAnUpperBound) {
  for (double p : {1.5, 2.0, 3.0}) {
    const BetaSequence beta(0.1, p);
    for (int n : {0, 1, 5, 20, 90}) {
      const double tail = beta.total() - beta.partial_sum(n);
      EXPECT_LE(tail, beta.tail_bound(n)) << p << ' ' << n;
      EXPECT_GT(tail, 0.0);
    }
  }
}

TEST(BetaSequence, Errors) {
  EXPECT_THROW(BetaSequence(0.1, 1.0), InvalidParameter);
  EXPECT_THROW(BetaSequence(0.0, 2.0), InvalidParameter);
  EXPECT_THROW(BetaSequence(0.1, 2.0).partial_sum(BetaSequence::kLevels + 1), SizeGuardError);
}

TEST(Construction, Feasibility) {
  EXPECT_NO_THROW(k18());
  const auto m2 = LorenzBranchMap::from_coefficient(2.0);
  try {
    cantor::make_construction(m2, 2.0);
    FAIL() << "c = 2, p = 2 must be infeasible";
  } catch (const FeasibilityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("zeta(p) = 1.644934067"), std::string::npos) << msg;
    EXPECT_NE(msg.find("a/b = 1.5906"), std::string::npos) << msg;
  }
  EXPECT_NO_THROW(cantor::make_construction(m2, 3.0));
  EXPECT_THROW(cantor::make_construction(LorenzBranchMap::from_coefficient(1.8), 1.0), InvalidParameter);
  EXPECT_THROW(CantorConstruction(-1.0, BetaSequence(0.1, 2.0)), InvalidParameter);
}

TEST(Construction, FirstIntervals) {
  const auto cc = k18();
  const auto m = LorenzBranchMap::from_coefficient(1.8);
  EXPECT_EQ(cc.interval_endpoints(Word()), (Interval{-m.a, m.a}));
  const auto i0 = cc.interval_endpoints(Word::from_string("0"));
  EXPECT_NEAR(i0.lo, m.b, 1e-16);
  EXPECT_EQ(i0.hi, m.a);
  const auto i1 = cc.interval_endpoints(Word::from_string("1"));
  EXPECT_EQ(i1.lo, -m.a);
  EXPECT_NEAR(i1.hi, -m.b, 1e-16);
  const auto g = cc.gap_endpoints(Word());
  EXPECT_NEAR(g.lo, -m.b, 1e-16);
  EXPECT_NEAR(g.hi, m.b, 1e-16);
}

TEST(Construction, GapsAreCentredWithStatedLength) {
  const auto cc = k18();
  SplitMix64 rng(11);
  for (int n = 0; n <= 30; ++n) {
    for (int rep = 0; rep < 8; ++rep) {
      const auto w = random_word(rng, n);
      const auto iv = cc.interval_endpoints(w);
      const auto gap = cc.gap_endpoints(w);
      const double expected = cc.beta().value(n) / std::ldexp(1.0, n);
      EXPECT_NEAR(gap.length(), expected, 1e-16 + 1e-9 * expected);
      EXPECT_NEAR(gap.center(), iv.center(), 1e-15);
    }
  }
}

TEST(Construction, NestingAndOrder) {
  const auto cc = k18();
  SplitMix64 rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    const auto w = random_word(rng, static_cast<int>(rng.below(30)));
    const auto iv = cc.interval_endpoints(w);
    const auto right = cc.interval_endpoints(w.child(0));
    const auto left = cc.interval_endpoints(w.child(1));
    const auto gap = cc.gap_endpoints(w);
    EXPECT_EQ(left.lo, iv.lo);
    EXPECT_EQ(right.hi, iv.hi);
    EXPECT_EQ(left.hi, gap.lo);
    EXPECT_EQ(gap.hi, right.lo);
    EXPECT_LT(gap.lo, gap.hi);
  }
}

TEST(Construction, ClosedFormMatchesRecursion) {
  const auto cc = k18();
  SplitMix64 rng(13);
  for (int n = 0; n <= 40; ++n) {
    const auto w = random_word(rng, n);
    const auto rec = cc.interval_endpoints(w);
    const auto closed = cc.interval_closed_form(w);
    EXPECT_NEAR(rec.lo, closed.lo, 1e-15);
    EXPECT_NEAR(rec.hi, closed.hi, 1e-15);
    EXPECT_NEAR(rec.length(), cc.interval_length(n), 1e-16);
  }
}

TEST(Construction, FlipIsReflection) {
  const auto cc = k18();
  SplitMix64 rng(14);
  for (int rep = 0; rep < 200; ++rep) {
    const auto w = random_word(rng, static_cast<int>(rng.below(25)));
    const auto iv = cc.interval_endpoints(w);
    const auto fl = cc.interval_endpoints(w.flipped());
    EXPECT_NEAR(fl.lo, -iv.hi, 1e-15);
    EXPECT_NEAR(fl.hi, -iv.lo, 1e-15);
  }
}

TEST(Measure, SmallLevels) {
  const auto cc = k18();
  const auto m = LorenzBranchMap::from_coefficient(1.8);
  EXPECT_EQ(cc.level_measure(0), 2.0 * m.a);
  EXPECT_NEAR(cc.level_measure(1), 2.0 * m.a - 2.0 * m.b, 1e-16);
}

TEST(Measure, TelescopesAndMatchesClosedForm) {
  const auto cc = k18();
  double prev = cc.level_measure(0);
  for (int N = 1; N <= 22; ++N) {
    const double cur = cc.level_measure(N);
    EXPECT_NEAR(prev - cur, cc.beta().value(N - 1), 1e-12) << N;
    EXPECT_NEAR(cur, cc.cover_measure(N), 1e-12) << N;
    EXPECT_LT(cur, prev);
    EXPECT_GT(cur, cc.limit_measure());
    prev = cur;
  }
}

TEST(Measure, LimitAndLevel20AgainstOracle) {
  const auto cc = k18();
  EXPECT_NEAR(cc.limit_measure(), kLimit, 1e-15);
  EXPECT_GT(cc.limit_measure(), 0.0);
  const double m20 = cc.level_measure(20);
  EXPECT_NEAR(m20, kLevel20, 1e-13);
  // The level-20 cover still carries the unremoved tail 2b sum_{n>=20} (n+1)^-2.
  EXPECT_LE(m20 - cc.limit_measure(), cc.beta().tail_bound(20));
  EXPECT_GT(m20 - cc.limit_measure(), 9e-3);
}

TEST(Measure, Guards) {
  const auto cc = k18();
  EXPECT_THROW(cc.level_measure(-1), DomainError);
  EXPECT_THROW(cc.level_measure(31), SizeGuardError);
  EXPECT_THROW(cc.level_intervals(25), SizeGuardError);
}

TEST(LevelIntervals, IndexingAndTotal) {
  const auto cc = k18();
  for (int N : {0, 1, 5, 12}) {
    const auto ivs = cc.level_intervals(N);
    ASSERT_EQ(ivs.size(), std::size_t{1} << N);
    double sum = 0.0;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      EXPECT_EQ(ivs[i], cc.interval_endpoints(Word::from_index(i, N)));
      sum += ivs[i].length();
    }
    EXPECT_NEAR(sum, cc.level_measure(N), 1e-13);
    auto sorted = ivs;
    std::sort(sorted.begin(), sorted.end(), [](auto& x, auto& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i) EXPECT_LT(sorted[i - 1].hi, sorted[i].lo);
  }
}

TEST(Locate, Examples) {
  const auto cc = k18();
  const auto m = LorenzBranchMap::from_coefficient(1.8);
  const auto centre = cc.locate(0.0, 10);
  EXPECT_TRUE(centre.in_gap);
  EXPECT_TRUE(centre.word.empty());
  const auto top = cc.locate(m.a, 12);
  EXPECT_FALSE(top.in_gap);
  EXPECT_EQ(top.word.to_string(), std::string(12, '0'));
  const auto i0 = cc.interval_endpoints(Word::from_string("0"));
  for (double x : {i0.lo, -i0.lo}) {
    const auto tie = cc.locate(x, 10);
    EXPECT_TRUE(tie.in_gap);
    EXPECT_TRUE(tie.word.empty());
  }
  EXPECT_THROW(cc.locate(m.a + 1e-9, 3), DomainError);
  EXPECT_THROW(cc.locate(0.0, 0), DomainError);
}

TEST(Locate, RoundTrip) {
  const auto cc = k18();
  SplitMix64 rng(15);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(20));
    const auto w = random_word(rng, n);
    const auto hit = cc.locate(cc.interval_endpoints(w).center(), n);
    EXPECT_FALSE(hit.in_gap);
    EXPECT_EQ(hit.word, w);
    const auto miss = cc.locate(cc.gap_endpoints(w).center(), n + 5);
    EXPECT_TRUE(miss.in_gap);
    EXPECT_EQ(miss.word, w);
  }
}

}  // namespace
