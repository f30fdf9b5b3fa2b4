/*
 * Copyright 2026 The rounds-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "rounds/errors.hpp"
#include "rounds/numeric.hpp"
#include "rounds/random.hpp"
#include "rounds/rank_sort.hpp"

namespace rounds {
namespace {

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{1});
  return v;
}

Query ask(std::size_t item, std::size_t t) { return RankQuery{Operand::item(item), t}; }

TEST(SortRank, NineItemsTwoRounds) {
  OracleSession session(HiddenInstance::from_ranks(identity(9)), 2);
  EXPECT_EQ(sort_rank(session, 2), identity(9));
  EXPECT_EQ(session.total_queries(), 28u);
  EXPECT_EQ(session.transcript().round_sizes(), (std::vector<std::size_t>{18, 10}));
}

TEST(SortRank, FirstRoundLeavesThreeBlocks) {
  OracleSession session(HiddenInstance::from_ranks(identity(9)), 2);
  std::vector<SortState> trace;
  sort_rank_traced(session, 2, &trace);
  ASSERT_FALSE(trace.empty());
  const SortState& s = trace.front();
  EXPECT_TRUE(s.well_formed());
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (const auto& b : s.blocks) spans.emplace_back(b.lo, b.hi);
  EXPECT_EQ(spans, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {4, 5}, {7, 9}}));
  EXPECT_EQ(s.resolved[2], 3u);
  EXPECT_EQ(s.resolved[5], 6u);
  for (const auto& state : trace) EXPECT_TRUE(state.well_formed());
}

TEST(SortRank, SingleItemIsFree) {
  for (std::size_t k = 1; k <= 3; ++k) {
    OracleSession session(HiddenInstance::from_ranks({1}), k);
    EXPECT_EQ(sort_rank(session, k), identity(1));
    EXPECT_EQ(session.total_queries(), 0u);
  }
}

TEST(SortRank, OneRoundUsesAtMostAllThresholds) {
  Rng rng = trial_rng(3, 0);
  const auto ranks = random_permutation(9, rng);
  OracleSession session(HiddenInstance::from_ranks(ranks), 1);
  EXPECT_EQ(sort_rank(session, 1), ranks);
  EXPECT_LE(session.total_queries(), 72u);
}

TEST(SortRank, ThresholdsAreEvenlySpaced) {
  RankBlock block{1, 9, identity(9)};
  EXPECT_EQ(block_thresholds(block, 2), (std::vector<std::size_t>{3, 6}));
  EXPECT_EQ(block_thresholds(block, 1), (std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8}));
  RankBlock upper{4, 5, {2, 7}};
  EXPECT_EQ(block_thresholds(upper, 1), std::vector<std::size_t>{4});
}

TEST(SortRank, EveryPermutationUpToSeven) {
  for (std::size_t n = 1; n <= 7; ++n) {
    auto perm = identity(n);
    do {
      for (std::size_t k = 1; k <= 3; ++k) {
        OracleSession session(HiddenInstance::from_ranks(perm), k);
        ASSERT_EQ(sort_rank(session, k), perm);
        ASSERT_LE(session.rounds_used(), k);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(SortRank, QueryCountWithinTheUpperBound) {
  for (std::size_t n : {10u, 64u, 100u, 256u}) {
    for (std::size_t k = 1; k <= 3; ++k) {
      for (std::uint64_t t = 0; t < 5; ++t) {
        Rng rng = trial_rng(n * 10 + k, t);
        OracleSession session(HiddenInstance::from_ranks(random_permutation(n, rng)), k);
        sort_rank(session, k);
        ASSERT_TRUE(within_power_bound(session.total_queries(), 2 * k, n, k)) << n << ' ' << k;
      }
    }
  }
}

TEST(SortingAdversary, NoQueriesNoSplit) {
  SortingAdversary adv(4);
  EXPECT_TRUE(adv.answer_round({}).empty());
  EXPECT_TRUE(adv.splits().empty());
  EXPECT_EQ(adv.remaining().size(), 4u);
  EXPECT_FALSE(adv.determined());
}

TEST(SortingAdversary, AllQueriedAtOneGivesEmptyPrefix) {
  SortingAdversary adv(4);
  const std::vector<Query> qs{ask(1, 1), ask(2, 1), ask(3, 1), ask(4, 1)};
  const auto answers = adv.answer_round(qs);
  ASSERT_EQ(adv.splits().size(), 1u);
  EXPECT_EQ(adv.splits()[0].x, 0u);
  EXPECT_TRUE(adv.splits()[0].smaller.empty());
  EXPECT_EQ(adv.splits()[0].mid, 1u);
  EXPECT_EQ(adv.fixed_rank(1), 1u);
  EXPECT_EQ(adv.round_queries(), std::vector<std::size_t>{4});
  EXPECT_EQ(answers, (std::vector<Ordering>{Ordering::Equal, Ordering::Greater, Ordering::Greater,
                                            Ordering::Greater}));
}

TEST(SortingAdversary, TwoUnqueriedItemsFormThePrefix) {
  SortingAdversary adv(5);
  std::vector<Query> qs;
  for (std::size_t item = 3; item <= 5; ++item) {
    for (std::size_t t = 1; t <= 3; ++t) qs.push_back(ask(item, t));
  }
  adv.answer_round(qs);
  ASSERT_FALSE(adv.splits().empty());
  const AdversarySplit& s = adv.splits()[0];
  EXPECT_EQ(s.x, 2u);
  EXPECT_EQ(s.smaller, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.mid, 3u);
  EXPECT_EQ(adv.fixed_rank(3), 3u);
}

TEST(SortingAdversary, MaxXMatchesBruteForceOverSubsets) {
  // For random single-round query sets on n <= 6, compare the adversary's x
  // with a subset enumeration of the definition.
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    Rng rng = trial_rng(77, trial);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    std::vector<Query> qs;
    std::vector<std::vector<bool>> asked(n + 1, std::vector<bool>(n + 1, false));
    for (std::size_t item = 1; item <= n; ++item) {
      for (std::size_t t = 1; t <= n; ++t) {
        if (std::bernoulli_distribution(0.3)(rng)) {
          qs.push_back(ask(item, t));
          asked[item][t] = true;
        }
      }
    }
    if (qs.empty()) continue;
    std::size_t best = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      const auto x = static_cast<std::size_t>(__builtin_popcount(mask));
      if (x >= n) continue;
      bool ok = true;
      for (std::size_t item = 1; item <= n && ok; ++item) {
        if (!(mask & (1u << (item - 1)))) continue;
        for (std::size_t t = 1; t <= x; ++t) ok = ok && !asked[item][t];
      }
      if (ok) best = std::max(best, x);
    }
    SortingAdversary adv(n);
    adv.answer_round(qs);
    ASSERT_FALSE(adv.splits().empty());
    ASSERT_EQ(adv.splits()[0].x, best) << "trial " << trial;
  }
}

TEST(SortingAdversary, WitnessIsConsistentWithEveryAnswer) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng = trial_rng(91, trial);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    SortingAdversary adv(n);
    std::vector<std::pair<Query, Ordering>> seen;
    for (int round = 0; round < 3; ++round) {
      std::vector<Query> qs;
      for (std::size_t item = 1; item <= n; ++item) {
        for (std::size_t t = 1; t <= n; ++t) {
          if (std::bernoulli_distribution(0.15)(rng)) qs.push_back(ask(item, t));
        }
      }
      const auto answers = adv.answer_round(qs);
      for (std::size_t i = 0; i < qs.size(); ++i) seen.emplace_back(qs[i], answers[i]);
      const auto witness = HiddenInstance::from_ranks(adv.witness_ranks());
      for (const auto& [q, a] : seen) ASSERT_EQ(witness.answer(q), a);
    }
  }
}

TEST(SortingAdversary, RejectsForeignQueries) {
  SortingAdversary adv(3);
  const std::vector<Query> cmp{ComparisonQuery{Operand::item(1), Operand::item(2)}};
  EXPECT_THROW(adv.answer_round(cmp), MalformedQuery);
  const std::vector<Query> tgt{RankQuery{Operand::target(), 1}};
  EXPECT_THROW(adv.answer_round(tgt), MalformedQuery);
  const std::vector<Query> out{ask(4, 1)};
  EXPECT_THROW(adv.answer_round(out), MalformedQuery);
}

TEST(ForcedCount, SingleItem) {
  EXPECT_EQ(forced_query_count(sort_rank, 1, 2), 0u);
}

TEST(ForcedCount, MeetsTheLowerBound) {
  for (std::size_t n : {16u, 64u, 128u, 256u}) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const std::size_t forced = forced_query_count(sort_rank, n, k);
      EXPECT_GE(static_cast<double>(forced), std::max(0.0, sorting_lower_bound(k, n))) << n << ' ' << k;
      EXPECT_TRUE(within_power_bound(forced, 2 * k, n, k));
    }
  }
}

TEST(ForcedCount, CatchesWrongSorters) {
  const RankSorter lazy = [](QuerySession& session, std::size_t) { return identity(session.size()); };
  EXPECT_THROW(forced_query_count(lazy, 4, 2), AlgorithmIncorrect);
}

TEST(LowerBound, FormulaValues) {
  EXPECT_NEAR(sorting_lower_bound(2, 100), 167.88, 0.01);
  EXPECT_NEAR(sorting_lower_bound(1, 2), -1.26, 0.01);
  EXPECT_NEAR(sorting_lower_bound(2, 256), 994.9, 0.1);
  for (std::size_t k = 1; k <= 5; ++k) EXPECT_LT(sorting_lower_bound(k, 1), 0.0);
}

TEST(SortState, DetectsBrokenInvariants) {
  SortState s;
  s.n = 3;
  s.resolved = {0, 0, 3};
  s.blocks = {RankBlock{1, 2, {1, 2}}};
  EXPECT_TRUE(s.well_formed());
  s.blocks = {RankBlock{1, 2, {1}}};
  EXPECT_FALSE(s.well_formed());
  s.blocks = {RankBlock{1, 2, {1, 3}}};
  EXPECT_FALSE(s.well_formed());
}

}  // namespace
}  // namespace rounds
