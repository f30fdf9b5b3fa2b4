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

// Experiment driver: exact enumeration or seeded Monte-Carlo runs of each
// problem, checked row by row against the closed-form bounds.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rounds/bounds.hpp"
#include "rounds/numeric.hpp"

namespace rounds {

enum class Problem { Locate, Select, Sort, Cake, Reduce, Bounds, BruteSelect, BruteLocate };
enum class Mode { Exact, MonteCarlo, Formula };

std::string to_string(Problem problem);
std::string to_string(Mode mode);
/// Accepts the names produced by to_string, plus "montecarlo" for Mode.
Problem parse_problem(std::string_view text);
Mode parse_mode(std::string_view text);

struct ExperimentConfig {
  Problem problem = Problem::Locate;
  std::size_t n = 16;
  std::size_t k = 2;
  Rational p = 1;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  Mode mode = Mode::Exact;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

struct BoundRow {
  Problem problem = Problem::Locate;
  std::uint64_t n = 0;
  std::size_t k = 0;
  Rational p;
  Mode mode = Mode::Exact;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<double> mean_queries;
  std::optional<double> ci95;
  std::optional<double> success_rate;
  /// Set in exact mode.
  std::optional<Rational> exact_mean;
  std::size_t max_queries = 0;
  /// Sorting rows: queries the splitting adversary forced on sort_rank.
  std::optional<std::size_t> forced_queries;
  BoundColumns bounds;
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  bool all_pass() const;
};

/// Evaluations allowed in exact mode: ROUNDS_LAB_BUDGET if set, else 10^7.
std::size_t exact_budget();

/// Runs one configuration. Throws InfeasibleExact when exact enumeration
/// would exceed exact_budget() or the problem has no finite input space,
/// and std::invalid_argument for an invalid configuration.
BoundReport run_experiment(const ExperimentConfig& config);

/// Formula-only rows over a probability grid; every row passes iff the
/// band centres have the expected shapes over the whole grid.
BoundReport bounds_sweep(std::uint64_t n, std::size_t k, std::span<const Rational> grid);

/// The index-th permutation of 1..n in lexicographic order.
std::vector<std::size_t> nth_permutation(std::size_t n, std::uint64_t index);

}  // namespace rounds
