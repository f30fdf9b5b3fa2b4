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

// Query-preserving translations between problems.
//
//  * Ordered search as Locate: a rank query on the promised element z at
//    threshold t is the comparison of z with x_t in the sorted array.
//  * Unordered search as Select: probing item i is the comparison of z with
//    x_i; only the answer "equal" carries information.
//  * Sorting as cake cutting: a cake adversary whose lazily placed i/n-points
//    are decided by one rank query each, so a proportional protocol run on
//    it reveals the hidden order.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rounds/cake.hpp"
#include "rounds/numeric.hpp"
#include "rounds/oracle.hpp"

namespace rounds {

/// Pairs each issued query with the query it was translated into, per round.
struct QueryBijection {
  std::vector<std::vector<std::pair<Query, Query>>> rounds;

  std::vector<std::size_t> round_sizes() const;
};

/// Rank-query view over a comparison session on a sorted array. Only rank
/// queries about the target are accepted.
class OrderedSearchLocateView final : public QuerySession {
 public:
  explicit OrderedSearchLocateView(QuerySession& comparisons);
  const QueryBijection& bijection() const { return bijection_; }

 protected:
  std::vector<Ordering> answer_batch(std::span<const Query> batch) override;

 private:
  QuerySession* comparisons_;
  QueryBijection bijection_;
};

/// Rank-query view over an unsorted array that has a target. The target's
/// item is presented as rank 1 and every other item as "greater", so only
/// threshold-1 rank queries on items are accepted.
class UnorderedSelectView final : public QuerySession {
 public:
  explicit UnorderedSelectView(QuerySession& comparisons);
  const QueryBijection& bijection() const { return bijection_; }

 protected:
  std::vector<Ordering> answer_batch(std::span<const Query> batch) override;

 private:
  QuerySession* comparisons_;
  QueryBijection bijection_;
};

/// Checks the instance is sorted by index and has a target, then wraps it.
/// Throws std::invalid_argument otherwise.
OrderedSearchLocateView ordered_to_locate_adapter(OracleSession& comparisons);

/// Checks the instance has a target, then wraps it.
UnorderedSelectView unordered_to_select_adapter(OracleSession& comparisons);

/// Lazily built adversarial valuations over n agents. Agent p's i/n-point
/// (i = 1..n) is one of the n slots of X_i = { i/(n+1) + c eps : c = 1..n };
/// the 0-point is 0. Agent p carries a spike of value i/(n^2+n) just left
/// of its i/n-point and (n-i)/(n^2+n) just right of it, each eps/2 wide.
class AdversaryCake {
 public:
  explicit AdversaryCake(std::size_t n);

  std::size_t size() const { return n_; }
  /// 1/(n^4 + 1).
  const Rational& epsilon() const { return eps_; }
  /// i/(n+1) + slot * eps.
  Rational slot_point(std::size_t i, std::size_t slot) const;
  std::vector<Rational> grid(std::size_t i) const;
  bool in_grid(std::size_t i, const Rational& y) const;

  std::optional<std::size_t> slot(std::size_t agent, std::size_t i) const;
  std::optional<Rational> point(std::size_t agent, std::size_t i) const;

  /// Places agent's i/n-point given how agent's hidden rank compares to i:
  /// Less takes the smallest unused slot, Greater the largest unused one,
  /// Equal slot i. Placing an already placed point is an error.
  void place(std::size_t agent, std::size_t i, Ordering rank_vs_i);

  /// The (agent, i) points a query needs that are not placed yet (at most
  /// one). Throws ProtocolNotPrimitive for a Cut value outside {i/n}.
  std::optional<std::pair<std::size_t, std::size_t>> missing_point(const RwQuery& q) const;

  /// Answer computed from placed points; missing_point(q) must be empty.
  Rational answer(const RwQuery& q) const;

  /// Places every remaining point from the given ranks (ranks[p-1] = rank of
  /// agent p). Throws InconsistentQuery if a rule needs a used slot.
  void complete(std::span<const std::size_t> ranks);

  bool fully_placed() const;

  /// Explicit densities; requires every point to be placed.
  std::vector<PiecewiseDensity> realize_densities() const;

 private:
  Rational value_up_to(std::size_t agent, const Rational& y) const;
  /// Open interval of y where the i-th spike pair may still matter.
  bool spike_zone(std::size_t i, const Rational& y) const;

  std::size_t n_;
  Rational eps_;
  std::vector<std::vector<std::size_t>> slot_of_;  // [agent-1][i-1], 0 = unplaced
  std::vector<std::vector<bool>> used_;            // [i-1][slot-1]
};

/// RW session answering from an AdversaryCake whose decisions are bought
/// with rank queries: every RW round triggers exactly one round on the rank
/// session, holding one RankQuery(agent, i) per newly placed point in
/// submission order.
class AdversaryCakeSession final : public RwSession {
 public:
  /// Borrows `ranks`; its round limit becomes this session's.
  explicit AdversaryCakeSession(QuerySession& ranks);
  /// Owns `ranks`.
  explicit AdversaryCakeSession(std::unique_ptr<QuerySession> ranks);

  const AdversaryCake& cake() const { return cake_; }
  AdversaryCake& cake() { return cake_; }
  const QuerySession& rank_session() const { return *ranks_; }

 protected:
  std::vector<Rational> answer_batch(std::span<const RwQuery> batch) override;

 private:
  std::unique_ptr<QuerySession> owned_;
  QuerySession* ranks_;
  AdversaryCake cake_;
};

/// Adversary cake driven by a private oracle over the permutation pi
/// (pi[p-1] = rank of agent p), with k rounds available.
std::unique_ptr<AdversaryCakeSession> build_adversary_cake(std::size_t n,
                                                           std::span<const std::size_t> pi,
                                                           std::size_t k);

/// Slice order phi (phi[i-1] = owner of the i-th slice from the left) and
/// the boundaries y_1..y_{n-1}.
struct SliceOrder {
  std::vector<std::size_t> phi;
  std::vector<Rational> boundaries;
};

SliceOrder slice_order(const Allocation& allocation);

/// Returns pi = phi^-1 (ranks per agent). Throws NotProportional if some
/// boundary y_i is outside X_i, and MalformedAllocation for a malformed
/// allocation.
std::vector<std::size_t> recover_permutation(const Allocation& allocation,
                                             const AdversaryCake& cake);

using CakeProtocol = std::function<Allocation(RwSession&)>;

struct CakeSortResult {
  std::vector<std::size_t> ranks;  // ranks[p-1] = rank of item p
  SliceOrder slices;
  std::size_t rw_queries = 0;
  std::size_t rank_queries = 0;
  std::vector<std::size_t> rw_round_sizes;
  std::vector<std::size_t> rank_round_sizes;
};

/// Sorts the items of `ranks` by running `protocol` against the adversary
/// cake. After the run the unplaced points are filled in from the recovered
/// order and the allocation is checked exactly for proportionality.
/// Throws ProtocolNotPrimitive or NotProportional.
CakeSortResult sort_via_cake(const CakeProtocol& protocol, std::size_t n, QuerySession& ranks);

/// The proportional protocol with k rounds, as a CakeProtocol.
CakeProtocol proportional_cake_protocol(std::size_t k);

}  // namespace rounds
