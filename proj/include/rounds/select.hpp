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
#pragma once

// Select: find the item holding a sought rank with rank queries in k rounds.
//
// The staged schedule queries, over the first j rounds, a cumulative
// ceil((np - 1) j / k) items in probe order and falls back to guessing the
// first unqueried item. A round is charged in full even if the sought item
// appears in it.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rounds/numeric.hpp"
#include "rounds/oracle.hpp"
#include "rounds/random.hpp"

namespace rounds {

struct SelectSchedule {
  std::size_t n = 0;
  std::size_t k = 0;
  Rational p;
  std::vector<std::size_t> round_sizes;

  /// ceil(max(np - 1, 0)); the number of items queried if no round hits.
  std::size_t total() const;
};

/// Throws std::invalid_argument unless n >= 1, 1 <= k <= n, p in [0,1].
SelectSchedule build_schedule(std::size_t n, std::size_t k, const Rational& p);

/// Probability that index i holds the sought element.
class ItemDistribution {
 public:
  explicit ItemDistribution(std::vector<Rational> weights);
  static ItemDistribution uniform(std::size_t n);
  static ItemDistribution point_mass(std::size_t n, std::size_t index);

  std::size_t size() const { return weights_.size(); }
  const Rational& weight(std::size_t index) const { return weights_.at(index - 1); }

 private:
  std::vector<Rational> weights_;
};

struct SelectOutcome {
  std::size_t index = 0;
  /// True when a query answered Equal; false means index is a guess.
  bool confirmed = false;
};

/// Runs the schedule over probe_order (a permutation of 1..n).
SelectOutcome select_det(QuerySession& session, const SelectSchedule& schedule,
                         std::span<const std::size_t> probe_order, std::size_t sought_rank);

/// Indices by descending weight, ties to the smaller index.
std::vector<std::size_t> likely_item_order(const ItemDistribution& dist);

/// Probability that select_det_dist returns the right item: the mass of the
/// queried prefix plus the guess.
Rational covered_mass(const ItemDistribution& dist, const SelectSchedule& schedule);

SelectOutcome select_det_dist(QuerySession& session, std::size_t k, const Rational& p,
                              const ItemDistribution& dist, std::size_t sought_rank);

/// With probability p runs the success-1 schedule over a uniformly random
/// probe order; otherwise asks nothing. Every fixed input then costs
/// p * exact_expected_queries(build_schedule(n, k, 1)) in expectation.
std::optional<SelectOutcome> select_rand(QuerySession& session, std::size_t k, const Rational& p,
                                         Rng& rng, std::size_t sought_rank);

/// Exact expectation of select_det's query count over a uniform target.
Rational exact_expected_queries(const SelectSchedule& schedule);

/// Exact per-input expected cost of select_rand.
Rational select_rand_expected_queries(std::size_t n, std::size_t k, const Rational& p);

/// np(1 - (k-1)p / 2k), the centre of the deterministic band.
Rational deterministic_select_centre(std::size_t n, std::size_t k, const Rational& p);

/// np(k+1) / 2k, the centre of the randomized band.
Rational randomized_select_centre(std::size_t n, std::size_t k, const Rational& p);

}  // namespace rounds
