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

// Closed-form query bounds for search and sorting in k rounds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rounds/numeric.hpp"

namespace rounds {

/// Floating-point bound columns for one (n, k, p) triple.
struct BoundColumns {
  double thm1_lo = 0;  // randomized select band: np(k+1)/(2k) -/+ 1
  double thm1_hi = 0;
  double thm2_lo = 0;  // deterministic select band: np(1 - (k-1)p/(2k)) -/+ 1
  double thm2_hi = 0;
  double thm3 = 0;     // k p n^(1/k)
  double thm4 = 0;     // k p^(1/k) n^(1/k)
  double thm5 = 0;     // k/(2e) n^(1+1/k) - k n
};

BoundColumns bound_columns(std::uint64_t n, std::size_t k, const Rational& p);

/// The two select bands as exact rationals.
struct ExactBands {
  Rational thm1_lo;
  Rational thm1_hi;
  Rational thm2_lo;
  Rational thm2_hi;
};

ExactBands exact_bands(std::uint64_t n, std::size_t k, const Rational& p);

/// 0, step, 2 step, ..., 1 for step = 1/steps.
std::vector<Rational> probability_grid(std::size_t steps);

/// Shape of the two select band centres along a sorted p grid.
struct CurveShape {
  bool thm1_linear = false;    // constant first differences on a uniform grid
  bool thm2_concave = false;   // strictly negative second differences (k >= 2)
  bool endpoints_match = false;  // both centres 0 at p = 0 and equal at p = 1
};

/// Exact shape check over a uniform grid that starts at 0 and ends at 1.
CurveShape curve_shape(std::uint64_t n, std::size_t k, std::span<const Rational> grid);

}  // namespace rounds
