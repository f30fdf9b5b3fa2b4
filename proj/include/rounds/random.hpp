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

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rounds/numeric.hpp"

namespace rounds {

using Rng = std::mt19937_64;

/// Independent stream for one trial, derived from (seed, trial index).
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Exact Bernoulli(p) for rational p in [0,1]; the denominator must fit in
/// 64 bits.
bool bernoulli(const Rational& p, Rng& rng);

/// Uniformly random permutation of 1..n.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace rounds
