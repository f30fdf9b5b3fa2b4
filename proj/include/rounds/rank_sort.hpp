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

// Sorting with rank queries in k rounds, and the max-x splitting adversary
// that forces query cost on any such sorter.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rounds/oracle.hpp"

namespace rounds {

/// A rank interval [lo, hi] together with the items known to occupy it.
struct RankBlock {
  std::size_t lo = 1;
  std::size_t hi = 0;
  std::vector<std::size_t> items;
};

struct SortState {
  std::size_t n = 0;
  std::vector<RankBlock> blocks;
  /// resolved[i-1] is item i's rank, or 0 while unresolved.
  std::vector<std::size_t> resolved;

  /// Every item resolved or in exactly one block whose size matches its
  /// interval length.
  bool well_formed() const;
};

/// Evenly spaced thresholds lo - 1 + floor(i m / z), i = 1..z-1, with
/// z = ceil(m^(1/rounds_left)) for an m-item block; every threshold but
/// the last when rounds_left == 1.
std::vector<std::size_t> block_thresholds(const RankBlock& block, std::size_t rounds_left);

/// Sorts all n items in at most k rounds. Returns ranks[i-1] = rank of
/// item i. Throws AlgorithmIncorrect if the answers are not consistent
/// with any order.
std::vector<std::size_t> sort_rank(QuerySession& session, std::size_t k);

/// Same, also returning the state after each round.
std::vector<std::size_t> sort_rank_traced(QuerySession& session, std::size_t k,
                                          std::vector<SortState>* trace);

/// k / (2e) * n^(1 + 1/k) - k n.
double sorting_lower_bound(std::size_t k, std::size_t n);

/// One max-x split: ranks [lo, lo + x - 1] go to `smaller`, `mid` takes
/// rank lo + x, and the rest stay above.
struct AdversarySplit {
  std::size_t round = 0;
  std::size_t lo = 0;
  std::size_t x = 0;
  std::vector<std::size_t> smaller;
  std::size_t mid = 0;
};

/// Adaptive adversary against rank-query sorters. Each block that receives
/// queries inside its own rank range in a round is split at the largest x
/// such that x of its items have no query in its first x ranks; the
/// lexicographically smallest such x-set goes first, the smallest
/// remaining item is fixed right after it, and the rest is split again in
/// the same round. Blocks without such queries wait for a later round.
class SortingAdversary {
 public:
  explicit SortingAdversary(std::size_t n);

  /// Answers one round of RankQuery on items. Throws MalformedQuery for
  /// comparison queries, target operands or out-of-range values, and
  /// InconsistentQuery if the internal commitments ever contradict.
  std::vector<Ordering> answer_round(std::span<const Query> queries);

  std::size_t size() const { return n_; }
  const std::vector<RankBlock>& pending() const { return pending_; }
  const std::vector<AdversarySplit>& splits() const { return splits_; }
  const std::vector<std::size_t>& round_queries() const { return round_queries_; }
  std::optional<std::size_t> fixed_rank(std::size_t item) const;

  /// Items not yet pinned to a single rank.
  std::vector<std::size_t> remaining() const;

  /// Every block has at most one item, so exactly one order is consistent.
  bool determined() const;

  /// A total order consistent with every answer so far (ranks per item).
  std::vector<std::size_t> witness_ranks() const;

 private:
  void split_block(RankBlock block, const std::vector<std::vector<std::size_t>>& in_range,
                   std::vector<RankBlock>& next);
  void fix(std::size_t item, std::size_t rank);

  std::size_t n_;
  std::vector<RankBlock> pending_;
  std::vector<std::size_t> fixed_;  // 0 = not fixed
  std::vector<AdversarySplit> splits_;
  std::vector<std::size_t> round_queries_;
};

/// Session whose answers come from a SortingAdversary.
class AdversarySession final : public QuerySession {
 public:
  AdversarySession(std::size_t n, std::size_t k_limit);
  const SortingAdversary& adversary() const { return adversary_; }

 protected:
  std::vector<Ordering> answer_batch(std::span<const Query> batch) override;

 private:
  SortingAdversary adversary_;
};

using RankSorter = std::function<std::vector<std::size_t>(QuerySession&, std::size_t)>;

/// Plays the adversary against `algorithm` and returns the total queries
/// it issued. Throws AlgorithmIncorrect if the output is not the unique
/// order left by the adversary's commitments.
std::size_t forced_query_count(const RankSorter& algorithm, std::size_t n, std::size_t k);

}  // namespace rounds
