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
#include "rounds/rank_sort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rounds/errors.hpp"
#include "rounds/numeric.hpp"

namespace rounds {

bool SortState::well_formed() const {
  std::vector<int> seen(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    if (resolved[i - 1] != 0) ++seen[i];
  }
  for (const auto& b : blocks) {
    if (b.hi < b.lo || b.items.size() != b.hi - b.lo + 1) return false;
    for (std::size_t item : b.items) ++seen[item];
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (seen[i] != 1) return false;
  }
  return true;
}

std::vector<std::size_t> block_thresholds(const RankBlock& block, std::size_t rounds_left) {
  if (rounds_left == 0) throw std::invalid_argument("no rounds left");
  const std::size_t m = block.hi - block.lo + 1;
  std::vector<std::size_t> out;
  if (m < 2) return out;
  if (rounds_left == 1) {
    for (std::size_t t = block.lo; t < block.hi; ++t) out.push_back(t);
    return out;
  }
  const std::size_t z = ceil_root(m, rounds_left);
  for (std::size_t i = 1; i < z; ++i) out.push_back(block.lo - 1 + (i * m) / z);
  return out;
}

std::vector<std::size_t> sort_rank_traced(QuerySession& session, std::size_t k,
                                          std::vector<SortState>* trace) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const std::size_t n = session.size();
  SortState state;
  state.n = n;
  state.resolved.assign(n, 0);
  if (n > 0) {
    RankBlock all{1, n, {}};
    all.items.resize(n);
    std::iota(all.items.begin(), all.items.end(), std::size_t{1});
    state.blocks.push_back(std::move(all));
  }

  const auto settle_singletons = [&state] {
    std::vector<RankBlock> open;
    for (auto& b : state.blocks) {
      if (b.items.size() == 1) {
        state.resolved[b.items.front() - 1] = b.lo;
      } else if (!b.items.empty()) {
        open.push_back(std::move(b));
      }
    }
    state.blocks = std::move(open);
  };

  for (std::size_t round = 1; round <= k; ++round) {
    settle_singletons();
    if (state.blocks.empty()) break;
    const std::size_t rounds_left = k - round + 1;

    std::vector<std::vector<std::size_t>> thresholds;
    std::vector<Query> batch;
    for (const auto& b : state.blocks) {
      thresholds.push_back(block_thresholds(b, rounds_left));
      for (std::size_t item : b.items) {
        for (std::size_t t : thresholds.back()) batch.emplace_back(RankQuery{Operand::item(item), t});
      }
    }
    const auto answers = session.submit_round(batch);

    std::vector<RankBlock> next;
    std::size_t cursor = 0;
    for (std::size_t bi = 0; bi < state.blocks.size(); ++bi) {
      const auto& b = state.blocks[bi];
      const auto& thr = thresholds[bi];
      std::vector<RankBlock> gaps(thr.size() + 1);
      for (std::size_t g = 0; g <= thr.size(); ++g) {
        gaps[g].lo = g == 0 ? b.lo : thr[g - 1] + 1;
        gaps[g].hi = g == thr.size() ? b.hi : thr[g] - 1;
      }
      for (std::size_t item : b.items) {
        std::size_t greater = 0;
        std::optional<std::size_t> exact;
        bool seen_less = false;
        for (std::size_t j = 0; j < thr.size(); ++j) {
          const Ordering a = answers[cursor++];
          if (a == Ordering::Equal) {
            exact = thr[j];
          } else if (a == Ordering::Greater) {
            if (seen_less || exact) throw AlgorithmIncorrect("non-monotone rank answers");
            ++greater;
          } else {
            seen_less = true;
          }
        }
        if (exact) {
          state.resolved[item - 1] = *exact;
        } else {
          gaps[greater].items.push_back(item);
        }
      }
      for (auto& g : gaps) {
        const std::size_t len = g.hi + 1 - g.lo;
        if (g.items.size() != len) {
          throw AlgorithmIncorrect("answers place " + std::to_string(g.items.size()) +
                                   " items into " + std::to_string(len) + " ranks");
        }
        if (len > 0) next.push_back(std::move(g));
      }
    }
    state.blocks = std::move(next);
    if (trace) trace->push_back(state);
  }
  settle_singletons();
  if (!state.blocks.empty()) throw AlgorithmIncorrect("rounds exhausted before the sort finished");
  return state.resolved;
}

std::vector<std::size_t> sort_rank(QuerySession& session, std::size_t k) {
  return sort_rank_traced(session, k, nullptr);
}

double sorting_lower_bound(std::size_t k, std::size_t n) {
  if (k == 0 || n == 0) throw std::invalid_argument("k and n must be >= 1");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return kd / (2.0 * std::numbers::e) * std::pow(nd, 1.0 + 1.0 / kd) - kd * nd;
}

// ---------------------------------------------------------------------------
// SortingAdversary

SortingAdversary::SortingAdversary(std::size_t n) : n_(n), fixed_(n, 0) {
  if (n == 0) throw std::invalid_argument("adversary needs n >= 1");
  if (n == 1) {
    fixed_[0] = 1;
    return;
  }
  RankBlock all{1, n, {}};
  all.items.resize(n);
  std::iota(all.items.begin(), all.items.end(), std::size_t{1});
  pending_.push_back(std::move(all));
}

std::optional<std::size_t> SortingAdversary::fixed_rank(std::size_t item) const {
  if (item < 1 || item > n_) throw std::out_of_range("item out of range");
  if (fixed_[item - 1] == 0) return std::nullopt;
  return fixed_[item - 1];
}

std::vector<std::size_t> SortingAdversary::remaining() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= n_; ++i) {
    if (fixed_[i - 1] == 0) out.push_back(i);
  }
  return out;
}

bool SortingAdversary::determined() const {
  return std::all_of(pending_.begin(), pending_.end(),
                     [](const RankBlock& b) { return b.items.size() <= 1; });
}

std::vector<std::size_t> SortingAdversary::witness_ranks() const {
  std::vector<std::size_t> ranks = fixed_;
  for (const auto& b : pending_) {
    std::vector<std::size_t> items = b.items;
    std::sort(items.begin(), items.end());
    for (std::size_t i = 0; i < items.size(); ++i) ranks[items[i] - 1] = b.lo + i;
  }
  return ranks;
}

void SortingAdversary::fix(std::size_t item, std::size_t rank) {
  if (fixed_[item - 1] != 0 && fixed_[item - 1] != rank) {
    throw InconsistentQuery("item " + std::to_string(item) + " already committed elsewhere");
  }
  fixed_[item - 1] = rank;
}

void SortingAdversary::split_block(RankBlock block,
                                   const std::vector<std::vector<std::size_t>>& asked,
                                   std::vector<RankBlock>& next) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t round = round_queries_.size() + 1;
  while (true) {
    std::sort(block.items.begin(), block.items.end());
    const std::size_t m = block.items.size();
    if (m == 0) return;
    if (m == 1) {
      fix(block.items.front(), block.lo);
      return;
    }

    // Smallest in-range relative threshold asked of each item.
    std::vector<std::size_t> first_hit(m, kNone);
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t t : asked[block.items[i] - 1]) {
        if (t >= block.lo && t <= block.hi) {
          first_hit[i] = std::min(first_hit[i], t - block.lo + 1);
          any = true;
        }
      }
    }
    if (!any) {
      next.push_back(std::move(block));
      return;
    }

    // Largest x with at least x items unqueried in relative ranks [1, x].
    std::vector<std::size_t> sorted_hits = first_hit;
    std::sort(sorted_hits.begin(), sorted_hits.end());
    std::size_t x = 0;
    for (std::size_t cand = m; cand-- > 0;) {
      const auto above = static_cast<std::size_t>(
          sorted_hits.end() - std::upper_bound(sorted_hits.begin(), sorted_hits.end(), cand));
      if (above >= cand) {
        x = cand;
        break;
      }
    }

    AdversarySplit split{round, block.lo, x, {}, 0};
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < m; ++i) {
      if (split.smaller.size() < x && first_hit[i] > x) {
        split.smaller.push_back(block.items[i]);
      } else {
        rest.push_back(block.items[i]);
      }
    }
    if (split.smaller.size() != x || rest.empty()) {
      throw InconsistentQuery("max-x split could not be formed");
    }
    split.mid = rest.front();
    rest.erase(rest.begin());
    fix(split.mid, block.lo + x);
    if (x == 1) {
      fix(split.smaller.front(), block.lo);
    } else if (x > 1) {
      next.push_back(RankBlock{block.lo, block.lo + x - 1, split.smaller});
    }
    splits_.push_back(split);
    block = RankBlock{block.lo + x + 1, block.hi, std::move(rest)};
  }
}

std::vector<Ordering> SortingAdversary::answer_round(std::span<const Query> queries) {
  std::vector<std::vector<std::size_t>> asked(n_);
  for (const auto& q : queries) {
    const auto* rq = std::get_if<RankQuery>(&q);
    if (!rq || rq->subject.is_target()) {
      throw MalformedQuery("the sorting adversary answers only rank queries on items");
    }
    const std::size_t item = rq->subject.index();
    if (item < 1 || item > n_ || rq->threshold < 1 || rq->threshold > n_) {
      throw MalformedQuery("query outside 1..n: " + describe(q));
    }
    asked[item - 1].push_back(rq->threshold);
  }

  std::vector<RankBlock> next;
  for (auto& b : pending_) split_block(std::move(b), asked, next);
  pending_ = std::move(next);

  std::vector<std::size_t> block_of(n_, std::numeric_limits<std::size_t>::max());
  for (std::size_t bi = 0; bi < pending_.size(); ++bi) {
    for (std::size_t item : pending_[bi].items) block_of[item - 1] = bi;
  }

  std::vector<Ordering> answers;
  answers.reserve(queries.size());
  for (const auto& q : queries) {
    const auto& rq = std::get<RankQuery>(q);
    const std::size_t item = rq.subject.index();
    if (fixed_[item - 1] != 0) {
      answers.push_back(compare_values(fixed_[item - 1], rq.threshold));
      continue;
    }
    const RankBlock& b = pending_.at(block_of[item - 1]);
    if (rq.threshold < b.lo) {
      answers.push_back(Ordering::Greater);
    } else if (rq.threshold > b.hi) {
      answers.push_back(Ordering::Less);
    } else {
      throw InconsistentQuery("unsplit block received an in-range query: " + describe(q));
    }
  }
  round_queries_.push_back(queries.size());
  return answers;
}

AdversarySession::AdversarySession(std::size_t n, std::size_t k_limit)
    : QuerySession(n, k_limit), adversary_(n) {}

std::vector<Ordering> AdversarySession::answer_batch(std::span<const Query> batch) {
  return adversary_.answer_round(batch);
}

std::size_t forced_query_count(const RankSorter& algorithm, std::size_t n, std::size_t k) {
  AdversarySession session(n, k);
  const auto output = algorithm(session, k);
  const auto& adversary = session.adversary();
  if (!adversary.determined()) {
    throw AlgorithmIncorrect("answers leave several orders open; the adversary picks another");
  }
  if (output != adversary.witness_ranks()) {
    throw AlgorithmIncorrect("output contradicts the adversary's commitments");
  }
  return session.total_queries();
}

}  // namespace rounds
