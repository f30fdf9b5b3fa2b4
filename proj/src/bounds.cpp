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
#include "rounds/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>


namespace rounds {

namespace {

Rational centre1(std::uint64_t n, std::size_t k, const Rational& p) {
  return Rational(BigInt(std::to_string(n))) * p * ratio(k + 1, 2 * k);
}

Rational centre2(std::uint64_t n, std::size_t k, const Rational& p) {
  return Rational(BigInt(std::to_string(n))) * p * (1 - ratio(k - 1, 2 * k) * p);
}

void check_args(std::uint64_t n, std::size_t k, const Rational& p) {
  if (n == 0 || k == 0) throw std::invalid_argument("n and k must be positive");
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");
}

}  // namespace

ExactBands exact_bands(std::uint64_t n, std::size_t k, const Rational& p) {
  check_args(n, k, p);
  const Rational c1 = centre1(n, k, p);
  const Rational c2 = centre2(n, k, p);
  return ExactBands{c1 - 1, c1 + 1, c2 - 1, c2 + 1};
}

BoundColumns bound_columns(std::uint64_t n, std::size_t k, const Rational& p) {
  const ExactBands bands = exact_bands(n, k, p);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double pd = p.get_d();
  const double root = std::pow(nd, 1.0 / kd);
  BoundColumns b;
  b.thm1_lo = bands.thm1_lo.get_d();
  b.thm1_hi = bands.thm1_hi.get_d();
  b.thm2_lo = bands.thm2_lo.get_d();
  b.thm2_hi = bands.thm2_hi.get_d();
  b.thm3 = kd * pd * root;
  b.thm4 = kd * std::pow(pd, 1.0 / kd) * root;
  b.thm5 = kd / (2 * std::numbers::e) * nd * root - kd * nd;
  return b;
}

std::vector<Rational> probability_grid(std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("grid needs at least one step");
  std::vector<Rational> grid;
  for (std::size_t i = 0; i <= steps; ++i) {
    const Rational p = ratio(i, steps);
    grid.push_back(p);
  }
  return grid;
}

CurveShape curve_shape(std::uint64_t n, std::size_t k, std::span<const Rational> grid) {
  if (grid.size() < 3 || grid.front() != 0 || grid.back() != 1) {
    throw std::invalid_argument("grid must run from 0 to 1 with at least three points");
  }
  std::vector<Rational> c1;
  std::vector<Rational> c2;
  for (const auto& p : grid) {
    c1.push_back(centre1(n, k, p));
    c2.push_back(centre2(n, k, p));
  }
  CurveShape shape;
  shape.thm1_linear = true;
  shape.thm2_concave = true;
  const Rational step = grid[1] - grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] - grid[i - 1] != step) throw std::invalid_argument("grid must be uniform");
  }
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (c1[i + 1] - 2 * c1[i] + c1[i - 1] != 0) shape.thm1_linear = false;
    const Rational second = c2[i + 1] - 2 * c2[i] + c2[i - 1];
    if (k >= 2 ? second >= 0 : second != 0) shape.thm2_concave = false;
  }
  shape.endpoints_match = c1.front() == 0 && c2.front() == 0 && c1.back() == c2.back();
  return shape;
}

}  // namespace rounds
