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
#include "rounds/numeric.hpp"

#include <stdexcept>

namespace rounds {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!is_integer_text(s)) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return BigInt(digits, 10);
}

}  // namespace

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") {
      whole = negative ? "-0" : "0";
    }
    if (frac.empty()) frac = "0";
    if (frac[0] == '-' || frac[0] == '+') {
      throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    }
    BigInt w = parse_integer(whole);
    BigInt f = parse_integer(frac);
    BigInt scale = power(BigInt(10), frac.size());
    Rational r(f, scale);
    r.canonicalize();
    return negative ? Rational(Rational(w) - r) : Rational(Rational(w) + r);
  }
  return Rational(parse_integer(text));
}

std::string to_fraction_string(const Rational& value) {
  Rational reduced = value;
  reduced.canonicalize();
  return reduced.get_num().get_str() + "/" + reduced.get_den().get_str();
}

BigInt floor_of(const Rational& value) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

BigInt ceil_of(const Rational& value) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

std::size_t to_size(const BigInt& value) {
  if (value < 0 || !value.fits_ulong_p()) {
    throw std::out_of_range("value does not fit in size_t: " + value.get_str());
  }
  return static_cast<std::size_t>(value.get_ui());
}

BigInt power(const BigInt& base, std::size_t exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

bool within_power_bound(std::size_t count, std::size_t coeff, std::size_t n, std::size_t k) {
  if (k == 0) throw std::invalid_argument("within_power_bound: k must be >= 1");
  const BigInt lhs = power(BigInt(static_cast<unsigned long>(count)), k);
  const BigInt rhs = power(BigInt(static_cast<unsigned long>(coeff)), k) *
                     power(BigInt(static_cast<unsigned long>(n)), k + 1);
  return lhs <= rhs;
}

std::size_t ceil_root(std::size_t r, std::size_t k) {
  if (k == 0) throw std::invalid_argument("ceil_root: k must be >= 1");
  if (r <= 1) return 1;
  BigInt target(static_cast<unsigned long>(r));
  BigInt root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), k);  // floor
  if (power(root, k) < target) root += 1;
  return to_size(root);
}

std::size_t ceil_log2(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ceil_log2: n must be >= 1");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

std::size_t ceil_power_fraction(std::size_t n, std::size_t j, std::size_t k) {
  if (k == 0 || j > k) throw std::invalid_argument("ceil_power_fraction: need j <= k, k >= 1");
  BigInt target = power(BigInt(static_cast<unsigned long>(n)), k - j);
  BigInt root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), k);
  if (power(root, k) < target) root += 1;
  return to_size(root);
}

}  // namespace rounds
