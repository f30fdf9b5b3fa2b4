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

// Exhaustive optimal-strategy search for tiny search instances.

#include <cstddef>
#include <vector>

#include "rounds/numeric.hpp"

namespace rounds {

/// An optimal deterministic select strategy: how many fresh items to probe
/// in each round, and whether to guess an unprobed item at the end.
struct SelectStrategy {
  std::vector<std::size_t> round_sizes;
  bool guess = false;
  Rational expected_queries;
  Rational success;
};

/// Minimum expected query count over deterministic k-round strategies that
/// find a uniformly placed target with probability >= p. Probes compare
/// items with the sought rank; any other answer only rules that item out,
/// and after a miss every unprobed item is alike, so a strategy is fixed by
/// its per-round probe counts and its guess rule. Throws SearchSpaceTooLarge
/// unless n <= 5 and k <= 2.
SelectStrategy brute_force_select(std::size_t n, std::size_t k, const Rational& p);

/// Minimum worst-case number of three-way rank queries that always find a
/// rank among n candidates in k rounds. Throws SearchSpaceTooLarge unless
/// n <= 32 and k <= 3.
std::size_t brute_force_locate(std::size_t n, std::size_t k);

}  // namespace rounds
