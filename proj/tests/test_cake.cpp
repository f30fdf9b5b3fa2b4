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

#include <filesystem>
#include <map>
#include <sstream>

#include "rounds/cake.hpp"
#include "rounds/cake_io.hpp"
#include "rounds/errors.hpp"

namespace rounds {
namespace {

PiecewiseDensity halves(int left, int right) {
  return PiecewiseDensity({Rational(0), ratio(1, 2), Rational(1)}, {Rational(left), Rational(right)});
}

std::vector<PiecewiseDensity> random_agents(std::size_t n, Rng& rng) {
  std::vector<PiecewiseDensity> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_density(rng));
  return out;
}

// q <= k n^(1+1/k) + k n, checked without floating point.
bool within_query_budget(std::size_t q, std::size_t n, std::size_t k) {
  return q <= k * n || within_power_bound(q - k * n, k, n, k);
}

TEST(CakeDensity, Validation) {
  EXPECT_THROW(PiecewiseDensity({Rational(0), Rational(1)}, {Rational(2)}), std::invalid_argument);
  EXPECT_THROW(PiecewiseDensity({Rational(0), ratio(1, 2)}, {Rational(2)}), std::invalid_argument);
  EXPECT_THROW(halves(3, -1), std::invalid_argument);
  EXPECT_THROW(PiecewiseDensity({Rational(0), ratio(1, 2), ratio(1, 2), Rational(1)},
                                {Rational(1), Rational(1), Rational(1)}),
               std::invalid_argument);
  const auto d = PiecewiseDensity::from_weights({Rational(0), ratio(1, 4), Rational(1)}, {Rational(3), Rational(1)});
  EXPECT_EQ(d.heights(), (std::vector<Rational>{Rational(2), ratio(2, 3)}));
}

TEST(CakeQueries, EvalExamples) {
  EXPECT_EQ(eval_query(PiecewiseDensity::uniform(), ratio(1, 3)), ratio(1, 3));
  EXPECT_EQ(eval_query(halves(2, 0), ratio(1, 4)), ratio(1, 2));
  Rng rng = trial_rng(5, 0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(eval_query(random_density(rng), Rational(1)), 1);
}

TEST(CakeQueries, CutExamplesUseTheLeftmostPoint) {
  EXPECT_EQ(cut_query(PiecewiseDensity::uniform(), ratio(1, 2)), ratio(1, 2));
  EXPECT_EQ(cut_query(halves(0, 2), Rational(0)), 0);
  EXPECT_EQ(cut_query(halves(2, 0), Rational(1)), ratio(1, 2));
  EXPECT_EQ(cut_query(halves(0, 2), ratio(1, 2)), ratio(3, 4));
}

TEST(CakeQueries, CutInvertsEval) {
  Rng rng = trial_rng(6, 0);
  for (int i = 0; i < 50; ++i) {
    const auto d = random_density(rng);
    for (int j = 0; j <= 12; ++j) {
      const Rational alpha = ratio(j, 12);
      const Rational y = cut_query(d, alpha);
      ASSERT_EQ(eval_query(d, y), alpha);
      // Leftmost: anything a hair to the left falls short.
      if (y > 0) {
        ASSERT_LT(eval_query(d, y - ratio(1, 1000000)), alpha);
      }
    }
  }
}

TEST(CakeSession, RejectsBadQueriesAndExtraRounds) {
  ValuationSession s({PiecewiseDensity::uniform(), PiecewiseDensity::uniform()}, 1);
  const std::vector<RwQuery> bad_agent{CutQuery{3, ratio(1, 2)}};
  EXPECT_THROW(s.submit_round(bad_agent), MalformedQuery);
  const std::vector<RwQuery> bad_alpha{CutQuery{1, Rational(2)}};
  EXPECT_THROW(s.submit_round(bad_alpha), MalformedQuery);
  const std::vector<RwQuery> bad_point{EvalQuery{1, Rational(-1)}};
  EXPECT_THROW(s.submit_round(bad_point), MalformedQuery);
  const std::vector<RwQuery> ok{EvalQuery{2, ratio(1, 4)}};
  EXPECT_EQ(s.submit_round(ok), std::vector<Rational>{ratio(1, 4)});
  EXPECT_THROW(s.submit_round(ok), RoundLimitExceeded);
  EXPECT_EQ(s.total_queries(), 1u);
}

TEST(CakeProtocol, SingleAgentTakesEverything) {
  const std::vector<PiecewiseDensity> agents{halves(2, 0)};
  const auto r = proportional_protocol(agents, 2);
  ASSERT_EQ(r.allocation.pieces.size(), 1u);
  EXPECT_EQ(r.allocation.pieces[0].left, 0);
  EXPECT_EQ(r.allocation.pieces[0].right, 1);
  EXPECT_EQ(r.transcript.total_queries, 0u);
}

TEST(CakeProtocol, ThousandAgentsFirstRound) {
  const std::vector<PiecewiseDensity> agents(1000, PiecewiseDensity::uniform());
  const auto r = proportional_protocol(agents, 3);
  ASSERT_FALSE(r.transcript.rounds.empty());
  const auto& first = r.transcript.rounds[0];
  ASSERT_EQ(first.size(), 9000u);
  std::map<std::size_t, std::vector<Rational>> asked;
  for (const auto& e : first) {
    const auto& c = std::get<CutQuery>(e.query);
    asked[c.agent].push_back(c.alpha);
  }
  ASSERT_EQ(asked.size(), 1000u);
  std::vector<Rational> tenths;
  for (int j = 1; j <= 9; ++j) tenths.push_back(ratio(j, 10));
  for (const auto& [agent, alphas] : asked) ASSERT_EQ(alphas, tenths) << agent;
  ASSERT_EQ(r.rounds[0].size(), 10u);
  for (const auto& c : r.rounds[0]) EXPECT_EQ(c.agents.size(), 100u);
  EXPECT_TRUE(verify_proportional(r.allocation, agents).proportional);
}

TEST(CakeProtocol, TwentySevenAgentsShrinkByThirds) {
  Rng rng = trial_rng(27, 0);
  const auto agents = random_agents(27, rng);
  const auto r = proportional_protocol(agents, 3);
  ASSERT_EQ(r.rounds.size(), 3u);
  const std::size_t caps[] = {9, 3, 1};
  for (std::size_t j = 0; j < 3; ++j) {
    for (const auto& c : r.rounds[j]) EXPECT_LE(c.agents.size(), caps[j]);
  }
  EXPECT_TRUE(verify_proportional(r.allocation, agents).proportional);
}

TEST(CakeProtocol, RandomInstancesAreProportional) {
  for (std::size_t n = 2; n <= 40; n += 3) {
    for (std::size_t k = 1; k <= 3; ++k) {
      for (std::uint64_t t = 0; t < 4; ++t) {
        Rng rng = trial_rng(1000 + n * 10 + k, t);
        const auto agents = random_agents(n, rng);
        const auto r = proportional_protocol(agents, k);
        const auto report = verify_proportional(r.allocation, agents);
        ASSERT_TRUE(report.proportional) << n << ' ' << k;
        for (const auto& v : report.values) ASSERT_GE(v, ratio(1, n));
        ASSERT_LE(r.transcript.rounds.size(), k);
        ASSERT_TRUE(within_query_budget(r.transcript.total_queries, n, k));
        for (std::size_t j = 0; j < r.rounds.size(); ++j) {
          for (const auto& c : r.rounds[j]) {
            ASSERT_LE(c.agents.size(), ceil_power_fraction(n, j + 1, k));
          }
        }
      }
    }
  }
}

TEST(CakeProtocol, MarksStayInsideTheSubcake) {
  Rng rng = trial_rng(33, 0);
  const auto agents = random_agents(20, rng);
  const auto r = proportional_protocol(agents, 3);
  for (const auto& round : r.rounds) {
    for (const auto& c : round) {
      EXPECT_EQ(c.b - c.a, ratio(c.agents.size(), 20));
      for (std::size_t agent : c.agents) {
        const auto& d = agents[agent - 1];
        EXPECT_GE(cut_query(d, c.a), c.left);
        EXPECT_LE(cut_query(d, c.b), c.right);
      }
    }
  }
}

TEST(CakeProtocol, QueriesDependOnlyOnEarlierRounds) {
  // Round j+1 must ask agent i for a_i + s/n, with a_i fixed by round j.
  Rng rng = trial_rng(34, 0);
  const std::size_t n = 30;
  const auto agents = random_agents(n, rng);
  const auto r = proportional_protocol(agents, 3);
  for (std::size_t j = 1; j < r.transcript.rounds.size(); ++j) {
    std::map<std::size_t, Rational> offset;
    for (const auto& c : r.rounds[j - 1]) {
      for (std::size_t agent : c.agents) offset[agent] = c.a;
    }
    for (const auto& e : r.transcript.rounds[j]) {
      const auto& c = std::get<CutQuery>(e.query);
      const Rational steps = (c.alpha - offset.at(c.agent)) * Rational(n);
      ASSERT_GT(steps, 0);
      ASSERT_EQ(steps.get_den(), 1);
    }
  }
  for (const auto& round : r.transcript.rounds) {
    for (const auto& e : round) ASSERT_TRUE(std::holds_alternative<CutQuery>(e.query));
  }
}

TEST(CakeVerifier, Examples) {
  const std::vector<PiecewiseDensity> uniform(2, PiecewiseDensity::uniform());
  Allocation even{{Piece{Rational(0), ratio(1, 2), 1}, Piece{ratio(1, 2), Rational(1), 2}}};
  const auto ok = verify_proportional(even, uniform);
  EXPECT_TRUE(ok.proportional);
  EXPECT_EQ(ok.values, (std::vector<Rational>{ratio(1, 2), ratio(1, 2)}));
  Allocation skew{{Piece{Rational(0), ratio(1, 4), 1}, Piece{ratio(1, 4), Rational(1), 2}}};
  EXPECT_FALSE(verify_proportional(skew, uniform).proportional);
}

TEST(CakeVerifier, RejectsMalformedAllocations) {
  const std::vector<PiecewiseDensity> uniform(2, PiecewiseDensity::uniform());
  Allocation gap{{Piece{Rational(0), ratio(1, 3), 1}, Piece{ratio(1, 2), Rational(1), 2}}};
  EXPECT_THROW(verify_proportional(gap, uniform), MalformedAllocation);
  Allocation overlap{{Piece{Rational(0), ratio(2, 3), 1}, Piece{ratio(1, 2), Rational(1), 2}}};
  EXPECT_THROW(verify_proportional(overlap, uniform), MalformedAllocation);
  Allocation twice{{Piece{Rational(0), ratio(1, 2), 1}, Piece{ratio(1, 2), Rational(1), 1}}};
  EXPECT_THROW(verify_proportional(twice, uniform), MalformedAllocation);
  Allocation short_end{{Piece{Rational(0), ratio(1, 2), 1}, Piece{ratio(1, 2), ratio(3, 4), 2}}};
  EXPECT_THROW(verify_proportional(short_end, uniform), MalformedAllocation);
}

TEST(CakeAssign, Examples) {
  const std::vector<std::size_t> two{1, 2};
  const std::vector<std::size_t> ones{1, 1};
  auto a = assign_subcakes(two, {{ratio(3, 10)}, {ratio(6, 10)}}, ones);
  EXPECT_EQ(a.cuts, std::vector<Rational>{ratio(3, 10)});
  EXPECT_EQ(a.groups, (std::vector<std::vector<std::size_t>>{{1}, {2}}));

  const std::vector<std::size_t> four{1, 2, 3, 4};
  const std::vector<std::size_t> pairs{2, 2};
  auto b = assign_subcakes(four, {{ratio(1, 10)}, {ratio(2, 10)}, {ratio(3, 10)}, {ratio(4, 10)}}, pairs);
  EXPECT_EQ(b.cuts, std::vector<Rational>{ratio(2, 10)});
  EXPECT_EQ(b.groups, (std::vector<std::vector<std::size_t>>{{1, 2}, {3, 4}}));

  auto c = assign_subcakes(four, std::vector<std::vector<Rational>>(4, {ratio(1, 2)}), std::vector<std::size_t>{1, 3});
  EXPECT_EQ(c.groups, (std::vector<std::vector<std::size_t>>{{1}, {2, 3, 4}}));
}

TEST(CakeAssign, GroupsRespectTheirCut) {
  Rng rng = trial_rng(12, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 7;
    std::vector<std::size_t> agents{2, 3, 5, 7, 11, 13, 17};
    std::vector<std::vector<Rational>> marks(m);
    for (auto& row : marks) {
      Rational at = 0;
      for (int j = 0; j < 2; ++j) {
        at += ratio(std::uniform_int_distribution<int>(0, 5)(rng), 20);
        row.push_back(at);
      }
    }
    const std::vector<std::size_t> targets{3, 2, 2};
    const auto out = assign_subcakes(agents, marks, targets);
    ASSERT_LE(out.cuts[0], out.cuts[1]);
    for (std::size_t j = 0; j < 3; ++j) ASSERT_EQ(out.groups[j].size(), targets[j]);
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t agent : out.groups[j]) {
        const auto idx = static_cast<std::size_t>(std::find(agents.begin(), agents.end(), agent) - agents.begin());
        ASSERT_LE(marks[idx][j], out.cuts[j]);
      }
    }
  }
}

TEST(CakeAssign, BalancedParts) {
  EXPECT_EQ(balanced_parts(10, 3), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(balanced_parts(1000, 10), std::vector<std::size_t>(10, 100));
}

TEST(CakeIo, RoundTrip) {
  Rng rng = trial_rng(44, 0);
  const auto agents = random_agents(6, rng);
  std::stringstream buf;
  write_cake_instance(buf, agents);
  const auto back = read_cake_instance(buf);
  ASSERT_EQ(back.size(), agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    EXPECT_EQ(back[i].breakpoints(), agents[i].breakpoints());
    EXPECT_EQ(back[i].heights(), agents[i].heights());
  }
  const auto path = std::filesystem::temp_directory_path() / "rounds_cake_io_test.txt";
  save_cake_instance(path, agents);
  EXPECT_EQ(load_cake_instance(path).size(), 6u);
  std::filesystem::remove(path);
}

TEST(CakeIo, ParsesCommentsAndReportsBadLines) {
  std::istringstream good("# two agents\n0 1 1\n\n0 2 1/2 0 1\n");
  const auto agents = read_cake_instance(good);
  ASSERT_EQ(agents.size(), 2u);
  EXPECT_EQ(eval_query(agents[1], ratio(1, 4)), ratio(1, 2));
  std::istringstream bad("0 1 1\n0 1 1/2\n");
  try {
    read_cake_instance(bad);
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(load_cake_instance("/nonexistent/dir/cake.txt"), IoFailure);
}

}  // namespace
}  // namespace rounds
