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
#include "rounds/locate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rounds {

BlockPlan plan_blocks(std::size_t lo, std::size_t hi, std::size_t rounds_left) {
  if (rounds_left < 2) throw std::invalid_argument("plan_blocks needs at least two rounds left");
  if (hi < lo) throw std::invalid_argument("plan_blocks needs a non-empty interval");
  const std::size_t r = hi - lo + 1;
  const std::size_t z = ceil_root(r, rounds_left);
  const std::size_t spare = r - (z - 1);
  const std::size_t base = spare / z;
  const std::size_t extra = spare % z;

  BlockPlan plan;
  plan.lo = lo;
  plan.hi = hi;
  std::size_t pos = lo;
  for (std::size_t b = 0; b < z; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    plan.blocks.emplace_back(pos, pos + len - 1);
    pos += len;
    if (b + 1 < z) plan.probes.push_back(pos++);
  }
  return plan;
}

RankDistribution::RankDistribution(std::vector<Rational> weights) : weights_(std::move(weights)) {
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw std::invalid_argument("negative rank weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("rank weights must sum to exactly 1");
}

RankDistribution RankDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("empty distribution");
  return RankDistribution(std::vector<Rational>(n, ratio(1, n)));
}

RankDistribution RankDistribution::point_mass(std::size_t n, std::size_t rank) {
  if (rank < 1 || rank > n) throw std::invalid_argument("point mass outside 1..n");
  std::vector<Rational> w(n, Rational(0));
  w[rank - 1] = 1;
  return RankDistribution(std::move(w));
}

std::size_t effective_locate_rounds(std::size_t n, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (n < 2) return k;
  return std::min(k, ceil_log2(n));
}

std::size_t locate_query_bound(std::size_t m, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  return k * ceil_root(m, k);
}

namespace {

// Candidates are sorted ranks. The true rank is known to lie in [low, high]
// (real rank space); candidates inside that window form the live block.
// When the block covers the whole window, membership is certain and a lone
// candidate needs no query.
LocateRun locate_over(QuerySession& session, const Operand& subject, std::size_t k,
                      std::span<const std::size_t> candidates) {
  LocateRun run;
  std::size_t low = 1;
  std::size_t high = session.size();
  std::size_t first = 0;                  // 0-based into candidates
  std::size_t count = candidates.size();  // live block size
  std::size_t rounds_left = effective_locate_rounds(candidates.size(), k);

  const auto refresh_block = [&] {
    auto begin = std::lower_bound(candidates.begin(), candidates.end(), low);
    auto end = std::upper_bound(candidates.begin(), candidates.end(), high);
    first = static_cast<std::size_t>(begin - candidates.begin());
    count = end > begin ? static_cast<std::size_t>(end - begin) : 0;
  };
  const auto certain = [&] { return high >= low && count == high - low + 1; };

  refresh_block();
  while (true) {
    if (count == 0 || low > high) return run;
    if (count == 1 && certain()) {
      run.rank = candidates[first];
      return run;
    }
    if (rounds_left == 0) return run;

    std::vector<std::size_t> probe_ranks;
    if (rounds_left == 1) {
      for (std::size_t i = 0; i < count; ++i) probe_ranks.push_back(candidates[first + i]);
    } else {
      const BlockPlan plan = plan_blocks(1, count, rounds_left);
      for (std::size_t pos : plan.probes) probe_ranks.push_back(candidates[first + pos - 1]);
    }

    std::vector<Query> batch;
    batch.reserve(probe_ranks.size());
    for (std::size_t r : probe_ranks) batch.emplace_back(RankQuery{subject, r});
    const std::vector<Ordering> answers = session.submit_round(batch);
    --rounds_left;

    for (std::size_t i = 0; i < answers.size(); ++i) {
      if (answers[i] == Ordering::Equal) {
        run.rank = probe_ranks[i];
        run.surviving.push_back(1);
        return run;
      }
      if (answers[i] == Ordering::Less) {
        high = std::min(high, probe_ranks[i] - 1);
      } else {
        low = std::max(low, probe_ranks[i] + 1);
      }
    }
    refresh_block();
    run.surviving.push_back(count);
  }
}

std::vector<std::size_t> all_ranks(std::size_t n) {
  std::vector<std::size_t> ranks(n);
  std::iota(ranks.begin(), ranks.end(), std::size_t{1});
  return ranks;
}

std::vector<std::size_t> sorted_unique(std::span<const std::size_t> ranks, std::size_t n) {
  std::vector<std::size_t> s(ranks.begin(), ranks.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) throw std::invalid_argument("rank subset must be non-empty");
  if (s.front() < 1 || s.back() > n) throw std::invalid_argument("rank subset outside 1..n");
  return s;
}

}  // namespace

LocateRun locate_det_traced(QuerySession& session, const Operand& subject, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const auto ranks = all_ranks(session.size());
  LocateRun run = locate_over(session, subject, k, ranks);
  if (!run.rank) throw std::logic_error("locate_det failed to resolve the rank");
  return run;
}

std::size_t locate_det(QuerySession& session, const Operand& subject, std::size_t k) {
  return *locate_det_traced(session, subject, k).rank;
}

std::optional<std::size_t> locate_rand(QuerySession& session, const Operand& subject,
                                       std::size_t k, const Rational& p, Rng& rng) {
  if (!bernoulli(p, rng)) return std::nullopt;
  return locate_det(session, subject, k);
}

LocateRun locate_det_subset_traced(QuerySession& session, const Operand& subject, std::size_t k,
                                   std::span<const std::size_t> ranks) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const auto s = sorted_unique(ranks, session.size());
  return locate_over(session, subject, k, s);
}

std::optional<std::size_t> locate_det_subset(QuerySession& session, const Operand& subject,
                                             std::size_t k, std::span<const std::size_t> ranks) {
  return locate_det_subset_traced(session, subject, k, ranks).rank;
}

std::vector<std::size_t> likely_rank_subset(const RankDistribution& dist, const Rational& p) {
  if (p <= 0 || p > 1) throw std::invalid_argument("p must lie in (0,1]");
  const std::size_t n = dist.size();
  const std::size_t m = to_size(ceil_of(p * Rational(n)));
  std::vector<std::size_t> order = all_ranks(n);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist.weight(a) > dist.weight(b);
  });
  order.resize(m);
  std::sort(order.begin(), order.end());
  return order;
}

Rational subset_mass(const RankDistribution& dist, std::span<const std::size_t> ranks) {
  Rational total = 0;
  for (std::size_t r : ranks) total += dist.weight(r);
  return total;
}

std::optional<std::size_t> locate_det_dist(QuerySession& session, const Operand& subject,
                                           std::size_t k, const Rational& p,
                                           const RankDistribution& dist) {
  if (dist.size() != session.size()) throw std::invalid_argument("distribution size mismatch");
  const auto s = likely_rank_subset(dist, p);
  return locate_det_subset(session, subject, k, s);
}

}  // namespace rounds
