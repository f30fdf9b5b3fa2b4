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
#include "rounds/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rounds {

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

bool bernoulli(const Rational& p, Rng& rng) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]");
  if (p == 0) return false;
  if (p == 1) return true;
  if (!p.get_den().fits_ulong_p()) throw std::invalid_argument("probability denominator too large");
  const std::uint64_t den = p.get_den().get_ui();
  const std::uint64_t num = p.get_num().get_ui();
  std::uniform_int_distribution<std::uint64_t> draw(0, den - 1);
  return draw(rng) < num;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{1});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace rounds
