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
#include "rounds/reductions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "rounds/errors.hpp"

namespace rounds {

std::vector<std::size_t> QueryBijection::round_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& r : rounds) sizes.push_back(r.size());
  return sizes;
}

// ---------------------------------------------------------------------------
// Search adapters

OrderedSearchLocateView::OrderedSearchLocateView(QuerySession& comparisons)
    : QuerySession(comparisons.size(), comparisons.k_limit() - comparisons.rounds_used()),
      comparisons_(&comparisons) {}

std::vector<Ordering> OrderedSearchLocateView::answer_batch(std::span<const Query> batch) {
  std::vector<Query> translated;
  translated.reserve(batch.size());
  for (const auto& q : batch) {
    const auto* rq = std::get_if<RankQuery>(&q);
    if (rq == nullptr || !rq->subject.is_target()) {
      throw MalformedQuery("ordered-search view answers rank queries on the target only");
    }
    translated.emplace_back(ComparisonQuery{Operand::target(), Operand::item(rq->threshold)});
  }
  auto answers = comparisons_->submit_round(translated);
  auto& log = bijection_.rounds.emplace_back();
  for (std::size_t i = 0; i < batch.size(); ++i) log.emplace_back(batch[i], translated[i]);
  return answers;
}

UnorderedSelectView::UnorderedSelectView(QuerySession& comparisons)
    : QuerySession(comparisons.size(), comparisons.k_limit() - comparisons.rounds_used()),
      comparisons_(&comparisons) {}

std::vector<Ordering> UnorderedSelectView::answer_batch(std::span<const Query> batch) {
  std::vector<Query> translated;
  translated.reserve(batch.size());
  for (const auto& q : batch) {
    const auto* rq = std::get_if<RankQuery>(&q);
    if (rq == nullptr || rq->subject.is_target() || rq->threshold != 1) {
      throw MalformedQuery("unordered-search view answers RankQuery(item, 1) only");
    }
    translated.emplace_back(ComparisonQuery{Operand::target(), rq->subject});
  }
  auto answers = comparisons_->submit_round(translated);
  auto& log = bijection_.rounds.emplace_back();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    log.emplace_back(batch[i], translated[i]);
    if (answers[i] != Ordering::Equal) answers[i] = Ordering::Greater;
  }
  return answers;
}

OrderedSearchLocateView ordered_to_locate_adapter(OracleSession& comparisons) {
  const auto& inst = comparisons.instance();
  if (!inst.target_index()) throw std::invalid_argument("ordered search needs a target");
  for (std::size_t i = 1; i <= inst.size(); ++i) {
    if (inst.rank_of(i) != i) throw std::invalid_argument("ordered search needs a sorted array");
  }
  return OrderedSearchLocateView(comparisons);
}

UnorderedSelectView unordered_to_select_adapter(OracleSession& comparisons) {
  if (!comparisons.instance().target_index()) {
    throw std::invalid_argument("unordered search needs a target");
  }
  return UnorderedSelectView(comparisons);
}

// ---------------------------------------------------------------------------
// Adversary cake

AdversaryCake::AdversaryCake(std::size_t n)
    : n_(n),
      slot_of_(n, std::vector<std::size_t>(n, 0)),
      used_(n, std::vector<bool>(n, false)) {
  if (n == 0) throw std::invalid_argument("need at least one agent");
  BigInt n4 = power(BigInt(n), 4);
  eps_ = ratio(1, n4 + 1);
}

Rational AdversaryCake::slot_point(std::size_t i, std::size_t slot) const {
  if (i < 1 || i > n_ || slot < 1 || slot > n_) throw std::out_of_range("no such grid slot");
  return ratio(i, n_ + 1) + Rational(slot) * eps_;
}

std::vector<Rational> AdversaryCake::grid(std::size_t i) const {
  std::vector<Rational> points;
  for (std::size_t c = 1; c <= n_; ++c) points.push_back(slot_point(i, c));
  return points;
}

bool AdversaryCake::in_grid(std::size_t i, const Rational& y) const {
  const Rational offset = (y - ratio(i, n_ + 1)) / eps_;
  return offset.get_den() == 1 && offset >= 1 && offset <= Rational(n_);
}

std::optional<std::size_t> AdversaryCake::slot(std::size_t agent, std::size_t i) const {
  const std::size_t s = slot_of_.at(agent - 1).at(i - 1);
  if (s == 0) return std::nullopt;
  return s;
}

std::optional<Rational> AdversaryCake::point(std::size_t agent, std::size_t i) const {
  if (auto s = slot(agent, i)) return slot_point(i, *s);
  return std::nullopt;
}

void AdversaryCake::place(std::size_t agent, std::size_t i, Ordering rank_vs_i) {
  if (agent < 1 || agent > n_ || i < 1 || i > n_) throw std::out_of_range("no such point");
  if (slot_of_[agent - 1][i - 1] != 0) throw std::logic_error("point already placed");
  auto& used = used_[i - 1];
  std::size_t chosen = 0;
  switch (rank_vs_i) {
    case Ordering::Less:
      for (std::size_t c = 1; c <= n_ && chosen == 0; ++c) {
        if (!used[c - 1]) chosen = c;
      }
      break;
    case Ordering::Greater:
      for (std::size_t c = n_; c >= 1 && chosen == 0; --c) {
        if (!used[c - 1]) chosen = c;
      }
      break;
    case Ordering::Equal:
      if (!used[i - 1]) chosen = i;
      break;
  }
  if (chosen == 0) {
    throw InconsistentQuery("no free slot in X_" + std::to_string(i) + " for agent " +
                            std::to_string(agent));
  }
  used[chosen - 1] = true;
  slot_of_[agent - 1][i - 1] = chosen;
}

bool AdversaryCake::spike_zone(std::size_t i, const Rational& y) const {
  const Rational half = eps_ / 2;
  return y > slot_point(i, 1) - half && y < slot_point(i, n_) + half;
}

std::optional<std::pair<std::size_t, std::size_t>> AdversaryCake::missing_point(
    const RwQuery& q) const {
  if (const auto* cut = std::get_if<CutQuery>(&q)) {
    const Rational scaled = cut->alpha * Rational(n_);
    if (scaled.get_den() != 1) {
      throw ProtocolNotPrimitive("Cut value " + to_fraction_string(cut->alpha) +
                                 " is not a multiple of 1/" + std::to_string(n_));
    }
    const std::size_t i = to_size(scaled.get_num());
    if (i == 0 || slot(cut->agent, i)) return std::nullopt;
    return std::pair{cut->agent, i};
  }
  const auto& eval = std::get<EvalQuery>(q);
  for (std::size_t i = 1; i <= n_; ++i) {
    if (!slot(eval.agent, i) && spike_zone(i, eval.point)) return std::pair{eval.agent, i};
  }
  return std::nullopt;
}

namespace {

/// Mass of a uniform spike [start, start + width] lying left of y.
Rational partial(const Rational& y, const Rational& start, const Rational& width,
                 const Rational& mass) {
  if (y <= start) return 0;
  if (y >= start + width) return mass;
  return mass * (y - start) / width;
}

}  // namespace

Rational AdversaryCake::value_up_to(std::size_t agent, const Rational& y) const {
  const Rational half = eps_ / 2;
  const Rational unit = ratio(1, n_ * n_ + n_);
  Rational total = partial(y, 0, half, ratio(1, n_ + 1));
  for (std::size_t i = 1; i <= n_; ++i) {
    if (auto p = point(agent, i)) {
      total += partial(y, *p - half, half, Rational(i) * unit);
      total += partial(y, *p, half, Rational(n_ - i) * unit);
    } else if (spike_zone(i, y)) {
      throw std::logic_error("value depends on an unplaced point");
    } else if (y > slot_point(i, 1)) {
      total += ratio(1, n_ + 1);
    }
  }
  total.canonicalize();
  return total;
}

Rational AdversaryCake::answer(const RwQuery& q) const {
  if (missing_point(q)) throw std::logic_error("answer needs an unplaced point");
  if (const auto* cut = std::get_if<CutQuery>(&q)) {
    const std::size_t i = to_size(Rational(cut->alpha * Rational(n_)).get_num());
    return i == 0 ? Rational(0) : *point(cut->agent, i);
  }
  const auto& eval = std::get<EvalQuery>(q);
  return value_up_to(eval.agent, eval.point);
}

void AdversaryCake::complete(std::span<const std::size_t> ranks) {
  if (ranks.size() != n_) throw std::invalid_argument("need one rank per agent");
  for (std::size_t p = 1; p <= n_; ++p) {
    for (std::size_t i = 1; i <= n_; ++i) {
      if (!slot(p, i)) place(p, i, compare_values(ranks[p - 1], i));
    }
  }
}

bool AdversaryCake::fully_placed() const {
  return std::all_of(slot_of_.begin(), slot_of_.end(), [](const auto& row) {
    return std::find(row.begin(), row.end(), std::size_t{0}) == row.end();
  });
}

std::vector<PiecewiseDensity> AdversaryCake::realize_densities() const {
  if (!fully_placed()) throw std::logic_error("densities need every point placed");
  const Rational half = eps_ / 2;
  const Rational unit = ratio(1, n_ * n_ + n_);
  std::vector<PiecewiseDensity> out;
  out.reserve(n_);
  for (std::size_t p = 1; p <= n_; ++p) {
    std::vector<Rational> bps{Rational(0), half};
    std::vector<Rational> heights{ratio(1, n_ + 1) / half};
    for (std::size_t i = 1; i <= n_; ++i) {
      const Rational at = *point(p, i);
      bps.push_back(at - half);
      heights.emplace_back(0);
      bps.push_back(at);
      heights.push_back(Rational(i) * unit / half);
      if (i < n_) {
        bps.push_back(at + half);
        heights.push_back(Rational(n_ - i) * unit / half);
      }
    }
    if (bps.back() < 1) {
      bps.emplace_back(1);
      heights.emplace_back(0);
    }
    for (auto& v : bps) v.canonicalize();
    for (auto& v : heights) v.canonicalize();
    out.emplace_back(std::move(bps), std::move(heights));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cake session backed by rank queries

AdversaryCakeSession::AdversaryCakeSession(QuerySession& ranks)
    : RwSession(ranks.size(), ranks.k_limit() - ranks.rounds_used()),
      ranks_(&ranks),
      cake_(ranks.size()) {}

AdversaryCakeSession::AdversaryCakeSession(std::unique_ptr<QuerySession> ranks)
    : AdversaryCakeSession(*ranks) {
  owned_ = std::move(ranks);
}

std::vector<Rational> AdversaryCakeSession::answer_batch(std::span<const RwQuery> batch) {
  std::vector<std::pair<std::size_t, std::size_t>> needed;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& q : batch) {
    if (auto m = cake_.missing_point(q); m && seen.insert(*m).second) needed.push_back(*m);
  }
  std::vector<Query> rank_batch;
  rank_batch.reserve(needed.size());
  for (const auto& [agent, i] : needed) {
    rank_batch.emplace_back(RankQuery{Operand::item(agent), i});
  }
  const auto replies = ranks_->submit_round(rank_batch);
  for (std::size_t j = 0; j < needed.size(); ++j) {
    cake_.place(needed[j].first, needed[j].second, replies[j]);
  }
  std::vector<Rational> answers;
  answers.reserve(batch.size());
  for (const auto& q : batch) answers.push_back(cake_.answer(q));
  return answers;
}

std::unique_ptr<AdversaryCakeSession> build_adversary_cake(std::size_t n,
                                                           std::span<const std::size_t> pi,
                                                           std::size_t k) {
  if (pi.size() != n) throw std::invalid_argument("permutation length differs from n");
  auto oracle = std::make_unique<OracleSession>(
      HiddenInstance::from_ranks(std::vector<std::size_t>(pi.begin(), pi.end())), k);
  return std::make_unique<AdversaryCakeSession>(std::move(oracle));
}

// ---------------------------------------------------------------------------
// Recovering the order

SliceOrder slice_order(const Allocation& allocation) {
  std::vector<Piece> pieces = allocation.pieces;
  const std::size_t n = pieces.size();
  if (n == 0) throw MalformedAllocation("allocation has no pieces");
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  });
  SliceOrder order;
  std::vector<bool> owned(n + 1, false);
  Rational edge = 0;
  for (const auto& piece : pieces) {
    if (piece.owner < 1 || piece.owner > n || owned[piece.owner]) {
      throw MalformedAllocation("each agent must own exactly one piece");
    }
    if (piece.left != edge || piece.right < piece.left) {
      throw MalformedAllocation("pieces must tile the cake without gaps or overlaps");
    }
    owned[piece.owner] = true;
    order.phi.push_back(piece.owner);
    edge = piece.right;
    if (order.phi.size() < n) order.boundaries.push_back(edge);
  }
  if (edge != 1) throw MalformedAllocation("pieces do not reach the end of the cake");
  return order;
}

std::vector<std::size_t> recover_permutation(const Allocation& allocation,
                                             const AdversaryCake& cake) {
  const SliceOrder order = slice_order(allocation);
  if (order.phi.size() != cake.size()) throw MalformedAllocation("one piece per agent expected");
  for (std::size_t i = 1; i < cake.size(); ++i) {
    if (!cake.in_grid(i, order.boundaries[i - 1])) {
      throw NotProportional("boundary y_" + std::to_string(i) + " lies outside X_" +
                            std::to_string(i));
    }
  }
  std::vector<std::size_t> pi(cake.size());
  for (std::size_t i = 1; i <= cake.size(); ++i) pi[order.phi[i - 1] - 1] = i;
  return pi;
}

CakeSortResult sort_via_cake(const CakeProtocol& protocol, std::size_t n, QuerySession& ranks) {
  if (ranks.size() != n) throw std::invalid_argument("rank session size differs from n");
  const std::size_t rank_rounds_before = ranks.rounds_used();
  AdversaryCakeSession session(ranks);
  const Allocation allocation = protocol(session);

  CakeSortResult result;
  result.slices = slice_order(allocation);
  result.ranks = recover_permutation(allocation, session.cake());

  const RoundTranscript rank_log = ranks.transcript();
  RoundTranscript own_part;
  own_part.rounds.assign(rank_log.rounds.begin() + static_cast<std::ptrdiff_t>(rank_rounds_before),
                         rank_log.rounds.end());
  if (!replay_consistent(own_part, HiddenInstance::from_ranks(result.ranks))) {
    throw NotProportional("slice order contradicts the rank answers");
  }
  AdversaryCake& cake = session.cake();
  cake.complete(result.ranks);
  const auto densities = cake.realize_densities();
  if (!verify_proportional(allocation, densities).proportional) {
    throw NotProportional("allocation gives some agent less than 1/n");
  }

  result.rw_queries = session.total_queries();
  result.rw_round_sizes = session.transcript().round_sizes();
  for (const auto& r : own_part.rounds) {
    result.rank_round_sizes.push_back(r.size());
    result.rank_queries += r.size();
  }
  return result;
}

CakeProtocol proportional_cake_protocol(std::size_t k) {
  return [k](RwSession& session) { return proportional_protocol(session, k).allocation; };
}

}  // namespace rounds
