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

// Locate: find rank(subject) with three-way rank queries in k rounds.
//
// The deterministic algorithm probes ceil(r^(1/k')) - 1 maximally equally
// spaced candidates of the surviving interval (r candidates, k' rounds
// left), which splits the rest into blocks whose sizes differ by at most
// one. The final round queries every remaining candidate.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rounds/numeric.hpp"
#include "rounds/oracle.hpp"
#include "rounds/random.hpp"

namespace rounds {

/// Probes over a 1-based position range [lo, hi] and the blocks between
/// them. Larger blocks come first.
struct BlockPlan {
  std::size_t lo = 1;
  std::size_t hi = 0;
  std::vector<std::size_t> probes;
  /// Inclusive [first, last] position ranges; an empty block has last < first.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
};

/// Plan for ceil(r^(1/rounds_left)) blocks over [lo, hi]. Requires
/// rounds_left >= 2 and hi >= lo.
BlockPlan plan_blocks(std::size_t lo, std::size_t hi, std::size_t rounds_left);

/// Probability of each rank 1..n being the target's rank.
class RankDistribution {
 public:
  /// Throws std::invalid_argument unless weights are >= 0 and sum to 1.
  explicit RankDistribution(std::vector<Rational> weights);
  static RankDistribution uniform(std::size_t n);
  static RankDistribution point_mass(std::size_t n, std::size_t rank);

  std::size_t size() const { return weights_.size(); }
  const Rational& weight(std::size_t rank) const { return weights_.at(rank - 1); }
  const std::vector<Rational>& weights() const { return weights_; }

 private:
  std::vector<Rational> weights_;
};

/// Outcome plus the surviving candidate count after each completed round.
struct LocateRun {
  std::optional<std::size_t> rank;
  std::vector<std::size_t> surviving;
};

/// Clamps k to ceil(log2 n) (n >= 2); more rounds never help.
std::size_t effective_locate_rounds(std::size_t n, std::size_t k);

/// Deterministic Locate; always correct when the session limit is >= k.
/// At most k * ceil(n^(1/k)) queries.
std::size_t locate_det(QuerySession& session, const Operand& subject, std::size_t k);

LocateRun locate_det_traced(QuerySession& session, const Operand& subject, std::size_t k);

/// Runs locate_det with probability p, otherwise asks nothing.
std::optional<std::size_t> locate_rand(QuerySession& session, const Operand& subject,
                                       std::size_t k, const Rational& p, Rng& rng);

/// Locate restricted to the candidate rank set S. Returns the rank iff it
/// lies in S, using at most k * ceil(|S|^(1/k)) queries either way.
std::optional<std::size_t> locate_det_subset(QuerySession& session, const Operand& subject,
                                             std::size_t k, std::span<const std::size_t> ranks);

LocateRun locate_det_subset_traced(QuerySession& session, const Operand& subject, std::size_t k,
                                   std::span<const std::size_t> ranks);

/// The ceil(p n) most likely ranks (ties to the smaller rank), ascending.
std::vector<std::size_t> likely_rank_subset(const RankDistribution& dist, const Rational& p);

/// Probability mass of a rank subset.
Rational subset_mass(const RankDistribution& dist, std::span<const std::size_t> ranks);

/// locate_det_subset over likely_rank_subset(dist, p); requires p in (0,1].
std::optional<std::size_t> locate_det_dist(QuerySession& session, const Operand& subject,
                                           std::size_t k, const Rational& p,
                                           const RankDistribution& dist);

/// k * ceil(m^(1/k)) for the clamped k.
std::size_t locate_query_bound(std::size_t m, std::size_t k);

}  // namespace rounds
