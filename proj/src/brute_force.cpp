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
#include "rounds/brute_force.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <limits>
#include <stdexcept>
#include <string>

#include "rounds/errors.hpp"

namespace rounds {

namespace {

void enumerate_sizes(std::size_t rounds_left, std::size_t remaining, std::vector<std::size_t>& prefix,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (rounds_left == 0) {
    visit(prefix);
    return;
  }
  for (std::size_t l = 0; l <= remaining; ++l) {
    prefix.push_back(l);
    enumerate_sizes(rounds_left - 1, remaining - l, prefix, visit);
    prefix.pop_back();
  }
}

}  // namespace

SelectStrategy brute_force_select(std::size_t n, std::size_t k, const Rational& p) {
  if (n > 5 || k > 2) {
    throw SearchSpaceTooLarge("brute-force select is limited to n <= 5 and k <= 2");
  }
  if (n == 0 || k == 0) throw std::invalid_argument("n and k must be positive");
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0,1]");

  std::optional<SelectStrategy> best;
  std::vector<std::size_t> prefix;
  enumerate_sizes(k, n, prefix, [&](const std::vector<std::size_t>& sizes) {
    // Round j is reached unless the target sat among the earlier probes.
    Rational cost = 0;
    std::size_t probed = 0;
    for (std::size_t l : sizes) {
      cost += ratio(n - probed, n) * Rational(l);
      probed += l;
    }
    for (bool guess : {false, true}) {
      if (guess && probed == n) continue;
      const Rational success = ratio(probed + (guess ? 1 : 0), n);
      if (success < p) continue;
      if (!best || cost < best->expected_queries) {
        best = SelectStrategy{sizes, guess, cost, success};
      }
    }
  });
  return *best;
}

std::size_t brute_force_locate(std::size_t n, std::size_t k) {
  if (n > 32 || k > 3) {
    throw SearchSpaceTooLarge("brute-force locate is limited to n <= 32 and k <= 3");
  }
  if (n == 0 || k == 0) throw std::invalid_argument("n and k must be positive");

  // worst[r][m]: fewest queries that always settle m candidates in r rounds.
  // A round of q queries inside the candidate interval either hits the
  // rank (answer Equal) or leaves one of the q + 1 gaps between them, and
  // the answers say which.
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> worst(k + 1, std::vector<std::size_t>(n + 1, kInf));
  for (std::size_t r = 0; r <= k; ++r) {
    worst[r][0] = 0;
    worst[r][1] = 0;
  }
  for (std::size_t r = 1; r <= k; ++r) {
    // spread[parts][left]: smallest possible worst gap cost when `left`
    // unprobed candidates fall into `parts` gaps, over all compositions.
    std::vector<std::vector<std::size_t>> spread(n + 2, std::vector<std::size_t>(n + 1, kInf));
    spread[1] = worst[r - 1];
    for (std::size_t parts = 2; parts <= n + 1; ++parts) {
      for (std::size_t left = 0; left <= n; ++left) {
        for (std::size_t g = 0; g <= left; ++g) {
          spread[parts][left] =
              std::min(spread[parts][left], std::max(worst[r - 1][g], spread[parts - 1][left - g]));
        }
      }
    }
    for (std::size_t m = 2; m <= n; ++m) {
      for (std::size_t q = 1; q <= m; ++q) {
        const std::size_t tail = spread[q + 1][m - q];
        if (tail != kInf) worst[r][m] = std::min(worst[r][m], q + tail);
      }
    }
  }
  return worst[k][n];
}

}  // namespace rounds
