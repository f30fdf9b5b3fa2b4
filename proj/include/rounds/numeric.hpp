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

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace rounds {

/// Exact rational arithmetic for probabilities, valuations and expectations.
using Rational = mpq_class;
using BigInt = mpz_class;

/// num/den in lowest terms. GMP's two-argument constructor does not
/// reduce, and its arithmetic expects reduced operands, so every fraction
/// built from integers goes through here. Throws std::invalid_argument on
/// den = 0.
Rational ratio(const BigInt& num, const BigInt& den);

/// Parses "p/q", "p" or a plain decimal such as "0.25" into a canonical
/// rational. Throws std::invalid_argument on malformed text or q = 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written with an explicit "/1".
std::string to_fraction_string(const Rational& value);

BigInt ceil_of(const Rational& value);
BigInt floor_of(const Rational& value);

/// Converts a non-negative BigInt known to fit into std::size_t.
std::size_t to_size(const BigInt& value);

/// Smallest z >= 1 with z^k >= r, i.e. ceil(r^(1/k)) computed without
/// floating point. r = 0 yields 1.
std::size_t ceil_root(std::size_t r, std::size_t k);

/// ceil(log2(n)) for n >= 1.
std::size_t ceil_log2(std::size_t n);

/// Smallest c >= 0 with c^k >= n^(k-j), i.e. ceil(n^(1-j/k)), for j <= k.
std::size_t ceil_power_fraction(std::size_t n, std::size_t j, std::size_t k);

BigInt power(const BigInt& base, std::size_t exponent);

/// Exact test of count <= coeff * n^(1 + 1/k), i.e.
/// count^k <= coeff^k * n^(k+1).
bool within_power_bound(std::size_t count, std::size_t coeff, std::size_t n, std::size_t k);

}  // namespace rounds
