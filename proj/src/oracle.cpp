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
#include "rounds/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rounds/errors.hpp"

namespace rounds {

char symbol(Ordering o) {
  switch (o) {
    case Ordering::Less:
      return '<';
    case Ordering::Equal:
      return '=';
    case Ordering::Greater:
      return '>';
  }
  return '?';
}

Ordering flip(Ordering o) {
  if (o == Ordering::Less) return Ordering::Greater;
  if (o == Ordering::Greater) return Ordering::Less;
  return o;
}

namespace {

std::string describe_operand(const Operand& op) {
  return op.is_target() ? std::string("z") : "x" + std::to_string(op.index());
}

void check_operand_shape(const Operand& op, std::size_t n) {
  if (!op.is_target() && (op.index() < 1 || op.index() > n)) {
    throw MalformedQuery("item index " + std::to_string(op.index()) + " outside 1.." +
                         std::to_string(n));
  }
}

void check_shape(const Query& q, std::size_t n) {
  if (const auto* rq = std::get_if<RankQuery>(&q)) {
    check_operand_shape(rq->subject, n);
    if (rq->threshold < 1 || rq->threshold > n) {
      throw MalformedQuery("threshold " + std::to_string(rq->threshold) + " outside 1.." +
                           std::to_string(n));
    }
    return;
  }
  const auto& cq = std::get<ComparisonQuery>(q);
  check_operand_shape(cq.left, n);
  check_operand_shape(cq.right, n);
  if (cq.left == cq.right) throw MalformedQuery("comparison of an operand with itself");
}

}  // namespace

std::string describe(const Query& q) {
  if (const auto* rq = std::get_if<RankQuery>(&q)) {
    return "rank(" + describe_operand(rq->subject) + ")?" + std::to_string(rq->threshold);
  }
  const auto& cq = std::get<ComparisonQuery>(q);
  return describe_operand(cq.left) + "?" + describe_operand(cq.right);
}

// ---------------------------------------------------------------------------
// HiddenInstance

HiddenInstance::HiddenInstance(std::vector<std::int64_t> keys, std::vector<std::size_t> ranks,
                               std::optional<std::size_t> target)
    : keys_(std::move(keys)), ranks_(std::move(ranks)), target_(target) {
  const std::size_t n = ranks_.size();
  item_of_rank_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = ranks_[i];
    if (r < 1 || r > n || item_of_rank_[r] != 0) {
      throw std::invalid_argument("ranks must be a permutation of 1..n");
    }
    item_of_rank_[r] = i + 1;
  }
  if (target_ && (*target_ < 1 || *target_ > n)) {
    throw std::invalid_argument("target index outside 1..n");
  }
}

HiddenInstance HiddenInstance::from_ranks(std::vector<std::size_t> ranks,
                                          std::optional<std::size_t> target) {
  std::vector<std::int64_t> keys(ranks.begin(), ranks.end());
  return HiddenInstance(std::move(keys), std::move(ranks), target);
}

HiddenInstance HiddenInstance::from_keys(std::vector<std::int64_t> keys,
                                         std::optional<std::size_t> target) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::size_t> ranks(keys.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && keys[order[r]] == keys[order[r - 1]]) {
      throw std::invalid_argument("keys must be distinct");
    }
    ranks[order[r]] = r + 1;
  }
  return HiddenInstance(std::move(keys), std::move(ranks), target);
}

std::size_t HiddenInstance::rank_of(std::size_t item) const {
  if (item < 1 || item > size()) throw std::out_of_range("item index out of range");
  return ranks_[item - 1];
}

std::int64_t HiddenInstance::key_of(std::size_t item) const {
  if (item < 1 || item > size()) throw std::out_of_range("item index out of range");
  return keys_[item - 1];
}

std::size_t HiddenInstance::target_rank() const {
  if (!target_) throw std::logic_error("instance has no target");
  return ranks_[*target_ - 1];
}

std::size_t HiddenInstance::item_with_rank(std::size_t rank) const {
  if (rank < 1 || rank > size()) throw std::out_of_range("rank out of range");
  return item_of_rank_[rank];
}

std::size_t HiddenInstance::resolve(const Operand& op) const {
  if (op.is_target()) {
    if (!target_) throw MalformedQuery("query references z but the instance has no target");
    return *target_;
  }
  if (op.index() < 1 || op.index() > size()) throw MalformedQuery("item index out of range");
  return op.index();
}

Ordering HiddenInstance::answer(const Query& q) const {
  check_shape(q, size());
  if (const auto* rq = std::get_if<RankQuery>(&q)) {
    return compare_values(ranks_[resolve(rq->subject) - 1], rq->threshold);
  }
  const auto& cq = std::get<ComparisonQuery>(q);
  return compare_values(keys_[resolve(cq.left) - 1], keys_[resolve(cq.right) - 1]);
}

bool HiddenInstance::rank_at_most(const Operand& subject, std::size_t t) const {
  if (t > size()) throw MalformedQuery("binary threshold outside 0..n");
  return ranks_[resolve(subject) - 1] <= t;
}

// ---------------------------------------------------------------------------
// Sessions

QuerySession::QuerySession(std::size_t n, std::size_t k_limit) : n_(n) {
  if (k_limit == 0) throw std::invalid_argument("k_limit must be at least 1");
  log_.k_limit = k_limit;
}

std::vector<Ordering> QuerySession::submit_round(std::span<const Query> batch) {
  if (!has_rounds_left()) {
    throw RoundLimitExceeded("all " + std::to_string(k_limit()) + " rounds already used");
  }
  for (const auto& q : batch) check_shape(q, n_);
  std::vector<Ordering> answers = answer_batch(batch);
  if (answers.size() != batch.size()) {
    throw std::logic_error("session produced a wrong number of answers");
  }
  auto& round = log_.rounds.emplace_back();
  round.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) round.push_back({batch[i], answers[i]});
  log_.total_queries += batch.size();
  return answers;
}

OracleSession::OracleSession(HiddenInstance instance, std::size_t k_limit)
    : QuerySession(instance.size(), k_limit), instance_(std::move(instance)) {}

std::vector<Ordering> OracleSession::answer_batch(std::span<const Query> batch) {
  std::vector<Ordering> out;
  out.reserve(batch.size());
  for (const auto& q : batch) out.push_back(instance_.answer(q));
  return out;
}

OracleSession open_session(HiddenInstance instance, std::size_t k_limit) {
  return OracleSession(std::move(instance), k_limit);
}

Ordering three_way_from_binary(std::size_t threshold,
                               const std::function<bool(std::size_t)>& rank_at_most) {
  if (threshold == 0) throw std::invalid_argument("threshold must be >= 1");
  if (rank_at_most(threshold - 1)) return Ordering::Less;
  if (rank_at_most(threshold)) return Ordering::Equal;
  return Ordering::Greater;
}

bool replay_consistent(const RoundTranscript& transcript, const HiddenInstance& instance) {
  for (const auto& round : transcript.rounds) {
    for (const auto& entry : round) {
      if (instance.answer(entry.query) != entry.answer) return false;
    }
  }
  return true;
}

}  // namespace rounds
