// Copyright 2026 The mrtradeoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mrt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  return Rational(num, den);
}

double to_double(const Rational& x);

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& x);

// Fixed-point rendering rounded half away from zero; exact, no binary
// floating point involved.
std::string to_decimal(const Rational& x, int places = 6);

// Renders a double with `places` decimals ("nan"/"inf" passed through).
std::string to_decimal(double x, int places = 6);

// Exact square root when x is the square of a rational, else nullopt.
std::optional<Rational> exact_sqrt(const Rational& x);

// Exact base-2 logarithm when x is a power of two (positive integer), else
// nullopt.
std::optional<unsigned> exact_log2(std::uint64_t x);

Rational pow(const Rational& base, unsigned exponent);

BigInt binomial(unsigned n, unsigned k);

// A scalar that is known exactly when the formula allows it and otherwise
// carries only its floating-point value (relative accuracy ~1e-15).
struct Quantity {
  double value = 0.0;
  std::optional<Rational> exact;

  Quantity() = default;
  explicit Quantity(double v) : value(v) {}
  explicit Quantity(const Rational& r) : value(to_double(r)), exact(r) {}

  bool is_exact() const { return exact.has_value(); }
  std::string decimal(int places = 6) const;
  // Exact "p/q" when available, else the decimal rendering with 17 digits.
  std::string repr() const;
};

Quantity divide(const Quantity& num, const Quantity& den);

// a <= b, exactly when both sides are exact, else by value.
bool less_equal(const Quantity& a, const Quantity& b);

}  // namespace mrt
