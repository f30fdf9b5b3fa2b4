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

// Round-disciplined query oracles.
//
// Items are addressed 1..n. A session accepts at most k_limit batches
// ("rounds"); every query of a batch is answered from state fixed before
// the batch arrived, so no answer can influence another query of the same
// batch. An empty batch still consumes a round. Repeated queries are
// answered and charged again.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rounds {

enum class Ordering { Less, Equal, Greater };

char symbol(Ordering o);

/// Reverses the direction of a three-way answer.
Ordering flip(Ordering o);

template <class T>
Ordering compare_values(const T& a, const T& b) {
  if (a < b) return Ordering::Less;
  if (b < a) return Ordering::Greater;
  return Ordering::Equal;
}

/// Either an array item x_i or the promised element z.
class Operand {
 public:
  static Operand item(std::size_t index) { return Operand(false, index); }
  static Operand target() { return Operand(true, 0); }

  bool is_target() const { return is_target_; }
  /// Only meaningful when !is_target().
  std::size_t index() const { return index_; }

  friend bool operator==(const Operand&, const Operand&) = default;

 private:
  Operand(bool is_target, std::size_t index) : is_target_(is_target), index_(index) {}
  bool is_target_;
  std::size_t index_;
};

/// "How is rank(subject) compared to threshold?"
struct RankQuery {
  Operand subject;
  std::size_t threshold;
  friend bool operator==(const RankQuery&, const RankQuery&) = default;
};

/// "How is left compared to right?"
struct ComparisonQuery {
  Operand left;
  Operand right;
  friend bool operator==(const ComparisonQuery&, const ComparisonQuery&) = default;
};

using Query = std::variant<RankQuery, ComparisonQuery>;

std::string describe(const Query& q);

/// Per-round batches of (query, answer) pairs.
template <class Q, class A>
struct RoundLog {
  struct Entry {
    Q query;
    A answer;
  };
  std::vector<std::vector<Entry>> rounds;
  std::size_t k_limit = 0;
  std::size_t total_queries = 0;

  std::vector<std::size_t> round_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(rounds.size());
    for (const auto& batch : rounds) sizes.push_back(batch.size());
    return sizes;
  }
};

using RoundTranscript = RoundLog<Query, Ordering>;

/// The secret an oracle answers from: n distinct keys, their ranks, and an
/// optional promised element z = x_target.
class HiddenInstance {
 public:
  /// ranks[i-1] is the rank of item i; must be a permutation of 1..n.
  static HiddenInstance from_ranks(std::vector<std::size_t> ranks,
                                   std::optional<std::size_t> target = std::nullopt);
  /// Distinct keys; ranks follow from sorting them.
  static HiddenInstance from_keys(std::vector<std::int64_t> keys,
                                  std::optional<std::size_t> target = std::nullopt);

  std::size_t size() const { return ranks_.size(); }
  std::size_t rank_of(std::size_t item) const;
  std::int64_t key_of(std::size_t item) const;
  std::optional<std::size_t> target_index() const { return target_; }
  /// Throws std::logic_error when the instance has no target.
  std::size_t target_rank() const;
  /// Item holding the given rank.
  std::size_t item_with_rank(std::size_t rank) const;
  const std::vector<std::size_t>& ranks() const { return ranks_; }

  /// Three-way answer; throws MalformedQuery for out-of-range or
  /// self-comparing queries, or a target operand without a target.
  Ordering answer(const Query& q) const;

  /// Binary form "is rank(subject) <= t?", defined for t in 0..n.
  bool rank_at_most(const Operand& subject, std::size_t t) const;

 private:
  HiddenInstance(std::vector<std::int64_t> keys, std::vector<std::size_t> ranks,
                 std::optional<std::size_t> target);
  std::size_t resolve(const Operand& op) const;

  std::vector<std::int64_t> keys_;
  std::vector<std::size_t> ranks_;
  std::vector<std::size_t> item_of_rank_;
  std::optional<std::size_t> target_;
};

/// Abstract round-limited oracle. Derived classes supply the answers; the
/// base enforces the round limit, validates shape against n, and records
/// the transcript.
class QuerySession {
 public:
  virtual ~QuerySession() = default;

  /// Throws RoundLimitExceeded when all rounds are used and MalformedQuery
  /// on an out-of-range index or threshold. A rejected batch leaves the
  /// transcript untouched.
  std::vector<Ordering> submit_round(std::span<const Query> batch);

  std::size_t size() const { return n_; }
  std::size_t k_limit() const { return log_.k_limit; }
  std::size_t rounds_used() const { return log_.rounds.size(); }
  std::size_t total_queries() const { return log_.total_queries; }
  bool has_rounds_left() const { return rounds_used() < k_limit(); }

  /// Snapshot of everything asked so far.
  RoundTranscript transcript() const { return log_; }

 protected:
  QuerySession(std::size_t n, std::size_t k_limit);
  QuerySession(const QuerySession&) = default;
  QuerySession(QuerySession&&) = default;
  QuerySession& operator=(const QuerySession&) = default;
  QuerySession& operator=(QuerySession&&) = default;

  virtual std::vector<Ordering> answer_batch(std::span<const Query> batch) = 0;

 private:
  std::size_t n_;
  RoundTranscript log_;
};

/// Session answering honestly from a fixed hidden instance.
class OracleSession final : public QuerySession {
 public:
  OracleSession(HiddenInstance instance, std::size_t k_limit);

  const HiddenInstance& instance() const { return instance_; }

 protected:
  std::vector<Ordering> answer_batch(std::span<const Query> batch) override;

 private:
  HiddenInstance instance_;
};

/// Throws std::invalid_argument when k_limit is 0.
OracleSession open_session(HiddenInstance instance, std::size_t k_limit);

/// Rebuilds a three-way rank answer at threshold t from two binary
/// "rank <= s" queries at s = t and s = t - 1.
Ordering three_way_from_binary(std::size_t threshold,
                               const std::function<bool(std::size_t)>& rank_at_most);

/// True iff every recorded answer matches a fresh evaluation against the
/// instance.
bool replay_consistent(const RoundTranscript& transcript, const HiddenInstance& instance);

}  // namespace rounds
