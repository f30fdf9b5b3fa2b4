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

// Cake cutting over [0,1] with exact rational piecewise-constant valuations,
// Robertson-Webb Cut/Eval queries in rounds, and a k-round proportional
// protocol that hands every agent one contiguous piece.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "rounds/numeric.hpp"
#include "rounds/oracle.hpp"
#include "rounds/random.hpp"

namespace rounds {

/// Value density that is constant on each (t_{j-1}, t_j).
class PiecewiseDensity {
 public:
  /// Requires 0 = t_0 < ... < t_m = 1, m heights >= 0, and total value
  /// exactly 1; throws std::invalid_argument otherwise.
  PiecewiseDensity(std::vector<Rational> breakpoints, std::vector<Rational> heights);

  static PiecewiseDensity uniform();
  /// Treats the weights as relative heights (non-negative, not all zero)
  /// and rescales them so the total value is 1.
  static PiecewiseDensity from_weights(std::vector<Rational> breakpoints,
                                       const std::vector<Rational>& weights);

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& heights() const { return heights_; }

  /// V([0, y]).
  Rational value_up_to(const Rational& y) const;
  /// V([left, right]).
  Rational value_between(const Rational& left, const Rational& right) const;
  /// Leftmost y with V([0, y]) = alpha.
  Rational leftmost_point(const Rational& alpha) const;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> heights_;
};

/// Eval: V([0, y]) for y in [0,1].
Rational eval_query(const PiecewiseDensity& density, const Rational& y);
/// Cut: the leftmost y with V([0, y]) = alpha for alpha in [0,1].
Rational cut_query(const PiecewiseDensity& density, const Rational& alpha);

struct CutQuery {
  std::size_t agent;  // 1-based
  Rational alpha;
};

struct EvalQuery {
  std::size_t agent;  // 1-based
  Rational point;
};

using RwQuery = std::variant<CutQuery, EvalQuery>;
using CakeTranscript = RoundLog<RwQuery, Rational>;

/// Round-limited Robertson-Webb oracle over n agents.
class RwSession {
 public:
  virtual ~RwSession() = default;

  /// Throws RoundLimitExceeded when out of rounds and MalformedQuery for an
  /// agent outside 1..n or a value/point outside [0,1].
  std::vector<Rational> submit_round(std::span<const RwQuery> batch);

  std::size_t agents() const { return n_; }
  std::size_t k_limit() const { return log_.k_limit; }
  std::size_t rounds_used() const { return log_.rounds.size(); }
  std::size_t total_queries() const { return log_.total_queries; }
  CakeTranscript transcript() const { return log_; }

 protected:
  RwSession(std::size_t n, std::size_t k_limit);
  RwSession(const RwSession&) = default;
  RwSession(RwSession&&) = default;
  RwSession& operator=(const RwSession&) = default;
  RwSession& operator=(RwSession&&) = default;

  virtual std::vector<Rational> answer_batch(std::span<const RwQuery> batch) = 0;

 private:
  std::size_t n_;
  CakeTranscript log_;
};

/// Agents answering truthfully from their densities.
class ValuationSession final : public RwSession {
 public:
  ValuationSession(std::vector<PiecewiseDensity> agents, std::size_t k_limit);
  const std::vector<PiecewiseDensity>& densities() const { return agents_; }

 protected:
  std::vector<Rational> answer_batch(std::span<const RwQuery> batch) override;

 private:
  std::vector<PiecewiseDensity> agents_;
};

struct Piece {
  Rational left;
  Rational right;
  std::size_t owner = 0;  // 1-based agent
};

struct Allocation {
  /// Ordered left to right.
  std::vector<Piece> pieces;
};

/// A subcake [left, right] shared by `agents`, each of whom is asked about
/// value fractions inside [a, b]; b - a = |agents| / n.
struct Subcake {
  Rational left;
  Rational right;
  std::vector<std::size_t> agents;
  Rational a;
  Rational b;
};

struct ProtocolResult {
  Allocation allocation;
  CakeTranscript transcript;
  /// Subcakes after each executed round, left to right.
  std::vector<std::vector<Subcake>> rounds;
};

/// k-round proportional protocol using only Cut queries. Each round splits
/// every subcake of m >= 2 agents into ceil(m^(1/k')) subcakes, k' being
/// the rounds left, with populations as equal as possible (larger first).
ProtocolResult proportional_protocol(RwSession& session, std::size_t k);
ProtocolResult proportional_protocol(std::span<const PiecewiseDensity> agents, std::size_t k);

/// Balanced split of m into z parts, larger parts first.
std::vector<std::size_t> balanced_parts(std::size_t m, std::size_t z);

struct SubcakeAssignment {
  std::vector<Rational> cuts;                   // z - 1 non-decreasing points
  std::vector<std::vector<std::size_t>> groups; // z groups of agent ids
};

/// Assigns agents to z = targets.size() subcakes. marks[i] holds the z - 1
/// Cut answers of agents[i]. Cut j is the targets[j]-th smallest j-th mark
/// among unassigned agents; ties go to the smaller agent id.
SubcakeAssignment assign_subcakes(std::span<const std::size_t> agents,
                                  const std::vector<std::vector<Rational>>& marks,
                                  std::span<const std::size_t> targets);

struct ProportionalityReport {
  bool proportional = false;
  std::vector<Rational> values;  // values[i-1] = V_i(A_i)
};

/// Exact check of V_i(A_i) >= 1/n. Throws MalformedAllocation if the pieces
/// overlap, leave gaps, or do not give each agent exactly one piece.
ProportionalityReport verify_proportional(const Allocation& allocation,
                                          std::span<const PiecewiseDensity> agents);

/// Random density with 1..max_segments pieces, breakpoints on a grid of
/// denominator `grid`, and integer weights in 0..9 (not all zero).
PiecewiseDensity random_density(Rng& rng, std::size_t max_segments = 6, std::size_t grid = 1000);

}  // namespace rounds
