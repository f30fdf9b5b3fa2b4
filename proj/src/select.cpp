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
#include "rounds/select.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rounds {

std::size_t SelectSchedule::total() const {
  return std::accumulate(round_sizes.begin(), round_sizes.end(), std::size_t{0});
}

SelectSchedule build_schedule(std::size_t n, std::size_t k, const Rational& p) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (k == 0 || k > n) throw std::invalid_argument("k must satisfy 1 <= k <= n");
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");

  SelectSchedule s{n, k, p, std::vector<std::size_t>(k, 0)};
  const Rational budget = p * Rational(n) - 1;
  if (budget < 0) return s;  // guessing alone reaches p <= 1/n

  std::size_t previous = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    const Rational share = budget * ratio(j, k);
    const std::size_t cumulative = to_size(ceil_of(share));
    s.round_sizes[j - 1] = cumulative - previous;
    previous = cumulative;
  }
  return s;
}

ItemDistribution::ItemDistribution(std::vector<Rational> weights) : weights_(std::move(weights)) {
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw std::invalid_argument("negative item weight");
    total += w;
  }
  if (weights_.empty() || total != 1) throw std::invalid_argument("item weights must sum to 1");
}

ItemDistribution ItemDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("empty distribution");
  return ItemDistribution(std::vector<Rational>(n, ratio(1, n)));
}

ItemDistribution ItemDistribution::point_mass(std::size_t n, std::size_t index) {
  if (index < 1 || index > n) throw std::invalid_argument("point mass outside 1..n");
  std::vector<Rational> w(n, Rational(0));
  w[index - 1] = 1;
  return ItemDistribution(std::move(w));
}

SelectOutcome select_det(QuerySession& session, const SelectSchedule& schedule,
                         std::span<const std::size_t> probe_order, std::size_t sought_rank) {
  const std::size_t n = schedule.n;
  if (session.size() != n || probe_order.size() != n) {
    throw std::invalid_argument("probe order must be a permutation of 1..n");
  }
  {
    std::vector<bool> seen(n + 1, false);
    for (std::size_t i : probe_order) {
      if (i < 1 || i > n || seen[i]) throw std::invalid_argument("probe order must be a permutation of 1..n");
      seen[i] = true;
    }
  }

  std::size_t next = 0;
  for (std::size_t size : schedule.round_sizes) {
    if (size == 0) continue;
    std::vector<Query> batch;
    batch.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      batch.emplace_back(RankQuery{Operand::item(probe_order[next + i]), sought_rank});
    }
    const auto answers = session.submit_round(batch);
    for (std::size_t i = 0; i < size; ++i) {
      if (answers[i] == Ordering::Equal) return {probe_order[next + i], true};
    }
    next += size;
  }
  // At most n - 1 items are ever queried, so a guess always exists.
  return {probe_order[next], false};
}

std::vector<std::size_t> likely_item_order(const ItemDistribution& dist) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist.weight(a) > dist.weight(b);
  });
  return order;
}

Rational covered_mass(const ItemDistribution& dist, const SelectSchedule& schedule) {
  const auto order = likely_item_order(dist);
  const std::size_t covered = std::min(schedule.total() + 1, order.size());
  Rational mass = 0;
  for (std::size_t i = 0; i < covered; ++i) mass += dist.weight(order[i]);
  return mass;
}

SelectOutcome select_det_dist(QuerySession& session, std::size_t k, const Rational& p,
                              const ItemDistribution& dist, std::size_t sought_rank) {
  if (dist.size() != session.size()) throw std::invalid_argument("distribution size mismatch");
  const auto schedule = build_schedule(session.size(), k, p);
  const auto order = likely_item_order(dist);
  return select_det(session, schedule, order, sought_rank);
}

std::optional<SelectOutcome> select_rand(QuerySession& session, std::size_t k, const Rational& p,
                                         Rng& rng, std::size_t sought_rank) {
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");
  if (!bernoulli(p, rng)) return std::nullopt;
  const auto schedule = build_schedule(session.size(), k, Rational(1));
  const auto order = random_permutation(session.size(), rng);
  return select_det(session, schedule, order, sought_rank);
}

Rational exact_expected_queries(const SelectSchedule& schedule) {
  // Group the n target positions of the probe order by the round that
  // finds them; the rest are guessed after the full schedule.
  Rational total = 0;
  std::size_t cumulative = 0;
  for (std::size_t size : schedule.round_sizes) {
    cumulative += size;
    total += Rational(size) * Rational(cumulative);
  }
  total += Rational(schedule.n - cumulative) * Rational(cumulative);
  return total / Rational(schedule.n);
}

Rational select_rand_expected_queries(std::size_t n, std::size_t k, const Rational& p) {
  return p * exact_expected_queries(build_schedule(n, k, Rational(1)));
}

Rational deterministic_select_centre(std::size_t n, std::size_t k, const Rational& p) {
  return Rational(n) * p * (1 - ratio(k - 1, 2 * k) * p);
}

Rational randomized_select_centre(std::size_t n, std::size_t k, const Rational& p) {
  return Rational(n) * p * ratio(k + 1, 2 * k);
}

}  // namespace rounds
