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

#include "mrt/rational.hpp"

#include <cmath>
#include <cstdio>

#include "mrt/error.hpp"

namespace mrt {

double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal(const Rational& x, int places) {
  BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  const bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  // round half away from zero
  BigInt scaled = (num * scale * 2 + den) / (den * 2);
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += whole.str();
  if (places > 0) {
    std::string f = frac.str();
    out += "." + std::string(static_cast<std::size_t>(places) - f.size(), '0') + f;
  }
  return out;
}

std::string to_decimal(double x, int places) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, x);
  return buf;
}

namespace {

std::optional<BigInt> exact_isqrt(const BigInt& v) {
  if (v < 0) return std::nullopt;
  BigInt root = boost::multiprecision::sqrt(v);
  if (root * root == v) return root;
  return std::nullopt;
}

}  // namespace

std::optional<Rational> exact_sqrt(const Rational& x) {
  auto num = exact_isqrt(boost::multiprecision::numerator(x));
  auto den = exact_isqrt(boost::multiprecision::denominator(x));
  if (!num || !den) return std::nullopt;
  return Rational(*num, *den);
}

std::optional<unsigned> exact_log2(std::uint64_t x) {
  if (x == 0 || (x & (x - 1)) != 0) return std::nullopt;
  unsigned k = 0;
  while ((x >> k) != 1) ++k;
  return k;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

std::string Quantity::decimal(int places) const {
  if (exact) return to_decimal(*exact, places);
  return to_decimal(value, places);
}

std::string Quantity::repr() const {
  if (exact) return to_string(*exact);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Quantity divide(const Quantity& num, const Quantity& den) {
  if (num.exact && den.exact) {
    if (*den.exact == 0) throw DomainError("division by an exact zero");
    return Quantity(*num.exact / *den.exact);
  }
  return Quantity(num.value / den.value);
}

bool less_equal(const Quantity& a, const Quantity& b) {
  if (a.exact && b.exact) return *a.exact <= *b.exact;
  return a.value <= b.value;
}

}  // namespace mrt
