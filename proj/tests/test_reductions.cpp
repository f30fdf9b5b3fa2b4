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
#include <set>

#include "rounds/errors.hpp"
#include "rounds/locate.hpp"
#include "rounds/rank_sort.hpp"
#include "rounds/reductions.hpp"
#include "rounds/select.hpp"

namespace rounds {
namespace {

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{1});
  return v;
}

// Sorted keys 10, 20, ... with the target at index t.
HiddenInstance sorted_with_target(std::size_t n, std::size_t t) {
  std::vector<std::int64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = static_cast<std::int64_t>(10 * (i + 1));
  return HiddenInstance::from_keys(keys, t);
}

// Shuffled keys with the target at index t; also the matching rank-1 instance.
std::pair<HiddenInstance, HiddenInstance> unsorted_with_target(std::size_t n, std::size_t t, Rng& rng) {
  const auto perm = random_permutation(n, rng);
  std::vector<std::int64_t> keys(perm.begin(), perm.end());
  std::vector<std::size_t> ranks(n);
  std::size_t next = 2;
  for (std::size_t i = 1; i <= n; ++i) ranks[i - 1] = i == t ? 1 : next++;
  return {HiddenInstance::from_keys(keys, t), HiddenInstance::from_ranks(ranks)};
}

TEST(LocateAdapter, AnswersThroughOneComparison) {
  OracleSession cmp(sorted_with_target(3, 2), 1);
  auto view = ordered_to_locate_adapter(cmp);
  const std::vector<Query> q{RankQuery{Operand::target(), 2}};
  EXPECT_EQ(view.submit_round(q), std::vector<Ordering>{Ordering::Equal});
  ASSERT_EQ(view.bijection().rounds.size(), 1u);
  const auto& [from, to] = view.bijection().rounds[0][0];
  EXPECT_EQ(from, q[0]);
  EXPECT_EQ(to, Query(ComparisonQuery{Operand::target(), Operand::item(2)}));
  EXPECT_EQ(cmp.total_queries(), 1u);
}

TEST(LocateAdapter, RejectsUnsortedOrTargetless) {
  OracleSession unsorted(HiddenInstance::from_keys({30, 10, 20}, 1), 2);
  EXPECT_THROW(ordered_to_locate_adapter(unsorted), std::invalid_argument);
  OracleSession no_target(HiddenInstance::from_keys({10, 20, 30}), 2);
  EXPECT_THROW(ordered_to_locate_adapter(no_target), std::invalid_argument);
  OracleSession ok(sorted_with_target(3, 1), 2);
  auto view = ordered_to_locate_adapter(ok);
  const std::vector<Query> item_query{RankQuery{Operand::item(1), 1}};
  EXPECT_THROW(view.submit_round(item_query), MalformedQuery);
}

TEST(LocateAdapter, SingleElementNeedsNothing) {
  OracleSession cmp(sorted_with_target(1, 1), 1);
  auto view = ordered_to_locate_adapter(cmp);
  EXPECT_EQ(locate_det(view, Operand::target(), 1), 1u);
  EXPECT_EQ(cmp.total_queries(), 0u);
}

TEST(LocateAdapter, SixteenElementsWorstCaseSeven) {
  std::size_t worst = 0;
  for (std::size_t t = 1; t <= 16; ++t) {
    OracleSession cmp(sorted_with_target(16, t), 2);
    auto view = ordered_to_locate_adapter(cmp);
    ASSERT_EQ(locate_det(view, Operand::target(), 2), t);
    OracleSession native(sorted_with_target(16, t), 2);
    locate_det(native, Operand::target(), 2);
    ASSERT_EQ(cmp.transcript().round_sizes(), native.transcript().round_sizes());
    ASSERT_EQ(view.bijection().round_sizes(), native.transcript().round_sizes());
    worst = std::max(worst, cmp.total_queries());
  }
  EXPECT_EQ(worst, 7u);
}

TEST(SelectAdapter, OnlyTheTargetAnswersEqual) {
  Rng rng = trial_rng(1, 0);
  auto [inst, ranked] = unsorted_with_target(6, 4, rng);
  OracleSession cmp(inst, 1);
  auto view = unordered_to_select_adapter(cmp);
  std::vector<Query> probes;
  for (std::size_t i = 1; i <= 6; ++i) probes.emplace_back(RankQuery{Operand::item(i), 1});
  const auto answers = view.submit_round(probes);
  for (std::size_t i = 1; i <= 6; ++i) {
    EXPECT_EQ(answers[i - 1], i == 4 ? Ordering::Equal : Ordering::Greater);
  }
  OracleSession no_target(HiddenInstance::from_keys({1, 2}), 1);
  EXPECT_THROW(unordered_to_select_adapter(no_target), std::invalid_argument);
}

TEST(SelectAdapter, TenItemsExpectSevenLikeNative) {
  const auto schedule = build_schedule(10, 2, Rational(1));
  Rng rng = trial_rng(2, 0);
  Rational total = 0;
  for (std::size_t t = 1; t <= 10; ++t) {
    auto [inst, ranked] = unsorted_with_target(10, t, rng);
    OracleSession cmp(inst, 2);
    auto view = unordered_to_select_adapter(cmp);
    ASSERT_EQ(select_det(view, schedule, identity(10), 1).index, t);
    OracleSession native(ranked, 2);
    select_det(native, schedule, identity(10), 1);
    ASSERT_EQ(cmp.transcript().round_sizes(), native.transcript().round_sizes());
    total += Rational(cmp.total_queries());
  }
  EXPECT_EQ(total / 10, 7);
}

TEST(Adapters, PerRoundCountsMatchNativeOnRandomInstances) {
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    Rng rng = trial_rng(808, trial);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const std::size_t t = std::uniform_int_distribution<std::size_t>(1, n)(rng);

    OracleSession cmp(sorted_with_target(n, t), k);
    auto view = ordered_to_locate_adapter(cmp);
    locate_det(view, Operand::target(), k);
    OracleSession native(sorted_with_target(n, t), k);
    locate_det(native, Operand::target(), k);
    ASSERT_EQ(cmp.transcript().round_sizes(), native.transcript().round_sizes());

    const std::size_t ks = std::min(k, n);
    const Rational p = ratio(std::uniform_int_distribution<int>(1, 4)(rng), 4);
    auto [inst, ranked] = unsorted_with_target(n, t, rng);
    OracleSession cmp2(inst, ks);
    auto view2 = unordered_to_select_adapter(cmp2);
    const auto order = random_permutation(n, rng);
    const auto schedule = build_schedule(n, ks, p);
    select_det(view2, schedule, order, 1);
    OracleSession native2(ranked, ks);
    select_det(native2, schedule, order, 1);
    ASSERT_EQ(cmp2.transcript().round_sizes(), native2.transcript().round_sizes());
  }
}

TEST(AdversaryCake, Geometry) {
  const AdversaryCake cake(3);
  EXPECT_EQ(cake.epsilon(), ratio(1, 82));
  EXPECT_LT(cake.epsilon(), ratio(1, 81));
  EXPECT_EQ(cake.slot_point(2, 3), ratio(2, 4) + 3 * cake.epsilon());
  EXPECT_EQ(cake.grid(1).size(), 3u);
  EXPECT_TRUE(cake.in_grid(1, cake.slot_point(1, 2)));
  EXPECT_FALSE(cake.in_grid(1, ratio(1, 4)));
  EXPECT_FALSE(cake.slot(1, 1).has_value());
}

TEST(AdversaryCake, SlotRulesForTwoAgents) {
  {
    auto s = build_adversary_cake(2, std::vector<std::size_t>{1, 2}, 2);
    const std::vector<RwQuery> q{CutQuery{1, ratio(1, 2)}};
    EXPECT_EQ(s->submit_round(q), std::vector<Rational>{s->cake().slot_point(1, 1)});
  }
  {
    auto s = build_adversary_cake(2, std::vector<std::size_t>{2, 1}, 2);
    const std::vector<RwQuery> q{CutQuery{1, ratio(1, 2)}, CutQuery{2, ratio(1, 2)}};
    const auto a = s->submit_round(q);
    EXPECT_EQ(a[0], s->cake().slot_point(1, 2));
    EXPECT_EQ(a[1], s->cake().slot_point(1, 1));
    EXPECT_EQ(s->rank_session().total_queries(), 2u);
  }
  {
    AdversaryCake cake(4);
    cake.place(1, 2, Ordering::Less);
    cake.place(3, 2, Ordering::Greater);
    cake.place(4, 2, Ordering::Equal);
    cake.place(2, 2, Ordering::Greater);
    EXPECT_EQ(cake.slot(1, 2), 1u);
    EXPECT_EQ(cake.slot(3, 2), 4u);
    EXPECT_EQ(cake.slot(4, 2), 2u);
    EXPECT_EQ(cake.slot(2, 2), 3u);
    EXPECT_ANY_THROW(cake.place(4, 2, Ordering::Less));
  }
}

TEST(AdversaryCake, CutAndZeroPoint) {
  auto s = build_adversary_cake(3, std::vector<std::size_t>{3, 1, 2}, 2);
  const std::vector<RwQuery> zero{CutQuery{2, Rational(0)}};
  EXPECT_EQ(s->submit_round(zero), std::vector<Rational>{Rational(0)});
  EXPECT_EQ(s->rank_session().total_queries(), 0u);
  EXPECT_EQ(s->rank_session().rounds_used(), 1u);
  const std::vector<RwQuery> odd{CutQuery{1, ratio(1, 2)}};
  EXPECT_THROW(s->submit_round(odd), ProtocolNotPrimitive);
}

TEST(AdversaryCake, PointsAreOrderedAndDistinct) {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    Rng rng = trial_rng(55, trial);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const auto pi = random_permutation(n, rng);
    AdversaryCake cake(n);
    cake.complete(pi);
    ASSERT_TRUE(cake.fully_placed());
    for (std::size_t i = 1; i <= n; ++i) {
      std::set<Rational> seen;
      for (std::size_t p = 1; p <= n; ++p) {
        const Rational y = *cake.point(p, i);
        ASSERT_TRUE(cake.in_grid(i, y));
        ASSERT_TRUE(seen.insert(y).second);
        if (i < n) {
          for (std::size_t q = 1; q <= n; ++q) ASSERT_LT(y, *cake.point(q, i + 1));
        }
      }
    }
    // Order property: rank(p) <= i <= rank(q) puts p's point first.
    for (std::size_t p = 1; p <= n; ++p) {
      for (std::size_t q = 1; q <= n; ++q) {
        if (p == q) continue;
        for (std::size_t i = pi[p - 1]; i <= pi[q - 1]; ++i) {
          ASSERT_LT(*cake.point(p, i), *cake.point(q, i));
        }
      }
    }
  }
}

TEST(AdversaryCake, RealizedDensitiesMatchTheAnswers) {
  for (std::size_t n = 1; n <= 6; ++n) {
    Rng rng = trial_rng(66, n);
    const auto pi = random_permutation(n, rng);
    AdversaryCake cake(n);
    cake.complete(pi);
    const auto densities = cake.realize_densities();
    ASSERT_EQ(densities.size(), n);
    for (std::size_t p = 1; p <= n; ++p) {
      for (std::size_t i = 1; i <= n; ++i) {
        const RwQuery cut = CutQuery{p, ratio(i, n)};
        ASSERT_EQ(cut_query(densities[p - 1], ratio(i, n)), *cake.point(p, i));
        ASSERT_EQ(cake.answer(cut), *cake.point(p, i));
        const Rational probe = cake.slot_point(i, 1 + (p + i) % n);
        ASSERT_EQ(cake.answer(EvalQuery{p, probe}), eval_query(densities[p - 1], probe));
      }
    }
  }
}

TEST(AdversaryCake, EvalAtAnotherAgentsPointHasTwoOutcomes) {
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    Rng rng = trial_rng(67, trial);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 7)(rng);
    const auto pi = random_permutation(n, rng);
    AdversaryCake cake(n);
    cake.complete(pi);
    for (std::size_t p = 1; p <= n; ++p) {
      for (std::size_t q = 1; q <= n; ++q) {
        if (p == q) continue;
        for (std::size_t i = 1; i <= n; ++i) {
          const Rational v = cake.answer(EvalQuery{p, *cake.point(q, i)});
          ASSERT_TRUE(v == ratio(i, n + 1) || v == ratio(i + 1, n + 1)) << to_fraction_string(v);
        }
      }
    }
  }
}

TEST(AdversaryCake, EvalNeedsAtMostOnePlacement) {
  auto s = build_adversary_cake(4, std::vector<std::size_t>{2, 4, 1, 3}, 3);
  const AdversaryCake& cake = s->cake();
  EXPECT_FALSE(cake.missing_point(EvalQuery{1, ratio(1, 10)}).has_value());
  const auto need = cake.missing_point(EvalQuery{1, cake.slot_point(2, 3)});
  ASSERT_TRUE(need.has_value());
  EXPECT_EQ(*need, (std::pair<std::size_t, std::size_t>{1, 2}));
  const std::vector<RwQuery> q{EvalQuery{1, cake.slot_point(2, 3)}};
  const auto a = s->submit_round(q);
  EXPECT_EQ(s->rank_session().total_queries(), 1u);
  // Agent 1 holds rank 2, so its 2/4-point takes slot 2, left of slot 3.
  EXPECT_EQ(a[0], ratio(3, 5));
}

TEST(CakeSort, EveryPermutationUpToFive) {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto pi = identity(n);
    do {
      for (std::size_t k = 1; k <= 3; ++k) {
        OracleSession ranks(HiddenInstance::from_ranks(pi), k);
        const auto out = sort_via_cake(proportional_cake_protocol(k), n, ranks);
        ASSERT_EQ(out.ranks, pi);
        ASSERT_LE(out.rank_queries, out.rw_queries);
        ASSERT_EQ(out.rank_round_sizes.size(), out.rw_round_sizes.size());
        for (std::size_t j = 0; j < out.rw_round_sizes.size(); ++j) {
          ASSERT_LE(out.rank_round_sizes[j], out.rw_round_sizes[j]);
        }
        AdversaryCake grid(n);
        for (std::size_t i = 1; i < n; ++i) ASSERT_TRUE(grid.in_grid(i, out.slices.boundaries[i - 1]));
        for (std::size_t i = 1; i <= n; ++i) ASSERT_EQ(pi[out.slices.phi[i - 1] - 1], i);

        OracleSession direct(HiddenInstance::from_ranks(pi), k);
        ASSERT_EQ(sort_rank(direct, k), out.ranks);
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
  }
}

TEST(CakeSort, SliceOrderExamples) {
  OracleSession swapped(HiddenInstance::from_ranks({2, 1}), 2);
  EXPECT_EQ(sort_via_cake(proportional_cake_protocol(2), 2, swapped).slices.phi,
            (std::vector<std::size_t>{2, 1}));
  OracleSession straight(HiddenInstance::from_ranks({1, 2, 3}), 2);
  const auto out = sort_via_cake(proportional_cake_protocol(2), 3, straight);
  EXPECT_EQ(out.slices.phi, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(out.ranks, (std::vector<std::size_t>{1, 2, 3}));
}

TEST(CakeSort, SingleAgentIsFree) {
  OracleSession ranks(HiddenInstance::from_ranks({1}), 1);
  const auto out = sort_via_cake(proportional_cake_protocol(1), 1, ranks);
  EXPECT_EQ(out.ranks, identity(1));
  EXPECT_EQ(out.rw_queries, 0u);
  EXPECT_EQ(out.rank_queries, 0u);
}

TEST(CakeSort, RejectsNonPrimitiveAndNonProportionalProtocols) {
  const CakeProtocol thirds = [](RwSession& s) {
    const std::vector<RwQuery> q{CutQuery{1, ratio(1, 3)}};
    s.submit_round(q);
    return Allocation{};
  };
  OracleSession r1(HiddenInstance::from_ranks({1, 2}), 2);
  EXPECT_THROW(sort_via_cake(thirds, 2, r1), ProtocolNotPrimitive);

  const CakeProtocol halves = [](RwSession&) {
    return Allocation{{Piece{Rational(0), ratio(1, 2), 1}, Piece{ratio(1, 2), Rational(1), 2}}};
  };
  OracleSession r2(HiddenInstance::from_ranks({1, 2}), 2);
  EXPECT_THROW(sort_via_cake(halves, 2, r2), NotProportional);
}

TEST(CakeSort, RecoverRejectsOffGridBoundaries) {
  AdversaryCake cake(2);
  cake.complete(std::vector<std::size_t>{2, 1});
  const Allocation good{{Piece{Rational(0), *cake.point(2, 1), 2}, Piece{*cake.point(2, 1), Rational(1), 1}}};
  EXPECT_EQ(recover_permutation(good, cake), (std::vector<std::size_t>{2, 1}));
  const Allocation bad{{Piece{Rational(0), ratio(1, 2), 2}, Piece{ratio(1, 2), Rational(1), 1}}};
  EXPECT_THROW(recover_permutation(bad, cake), NotProportional);
}

}  // namespace
}  // namespace rounds
