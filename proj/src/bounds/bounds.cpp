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

#include "mrt/bounds.hpp"

#include <cmath>

#include "mrt/error.hpp"

namespace mrt::bounds {

namespace {

// base^exponent when the result is rational and the exponent's denominator
// is 1 or 2; nullopt otherwise.
std::optional<Rational> exact_power(const Rational& base, const Rational& exponent) {
  const BigInt num = boost::multiprecision::numerator(exponent);
  const BigInt den = boost::multiprecision::denominator(exponent);
  if (num > 64 * 1024 || num < -64 * 1024) return std::nullopt;
  Rational root = base;
  if (den == 2) {
    auto r = exact_sqrt(base);
    if (!r) return std::nullopt;
    root = *r;
  } else if (den != 1) {
    return std::nullopt;
  }
  const long long e = num.convert_to<long long>();
  if (e < 0 && root == 0) return std::nullopt;
  Rational p = pow(root, static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rational(1) / p : p;
}

double log2_of(std::uint64_t q) { return std::log2(static_cast<double>(q)); }

void require_q(std::uint64_t q, std::uint64_t minimum, const char* problem) {
  if (q < minimum) {
    throw DomainError(std::string(problem) + ": reducer size q=" + std::to_string(q) +
                      " is below the minimum " + std::to_string(minimum));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// g(q)

std::string GFunction::name() const {
  switch (family) {
    case Family::Hd1: return "hd1";
    case Family::Triangle: return "triangle";
    case Family::TwoPath: return "twopath";
    case Family::Alon: return "alon(s=" + std::to_string(s) + ")";
    case Family::Join: return "join(rho=" + to_string(rho) + ")";
    case Family::MatMul: return "matmul(n=" + std::to_string(n) + ")";
  }
  return "?";
}

double GFunction::eval(double q) const {
  switch (family) {
    case Family::Hd1: return q / 2 * std::log2(q);
    case Family::Triangle: return std::sqrt(2.0) / 3 * std::pow(q, 1.5);
    case Family::TwoPath: return q * (q - 1) / 2;
    case Family::Alon: return std::pow(q, s / 2.0);
    case Family::Join: return std::pow(q, to_double(rho));
    case Family::MatMul: return q * q / (4.0 * static_cast<double>(n) * static_cast<double>(n));
  }
  return 0;
}

std::optional<Rational> GFunction::exact(std::uint64_t q) const {
  const Rational rq(q);
  switch (family) {
    case Family::Hd1: {
      auto lg = exact_log2(q);
      if (!lg) return std::nullopt;
      return rq * *lg / 2;
    }
    case Family::Triangle: {
      // q sqrt(2q) / 3
      auto root = exact_sqrt(rq * 2);
      if (!root) return std::nullopt;
      return rq * *root / 3;
    }
    case Family::TwoPath: return q == 0 ? Rational(0) : Rational(BigInt(q) * (q - 1) / 2);
    case Family::Alon: return exact_power(rq, Rational(s, 2));
    case Family::Join: return exact_power(rq, rho);
    case Family::MatMul: return rq * rq / (Rational(n) * n * 4);
  }
  return std::nullopt;
}

Quantity recipe_bound(const GFunction& g, const Rational& input_count,
                      const Rational& output_count, std::uint64_t q) {
  if (q < 1) throw DomainError("reducer size q must be at least 1");
  if (input_count <= 0) throw DomainError("input count must be positive");
  if (output_count < 0) throw DomainError("output count must be nonnegative");
  if (g.family == GFunction::Family::MatMul && g.n == 0) throw InvalidParameter("matmul g needs n >= 1");
  if (auto gq = g.exact(q)) {
    if (*gq == 0) {
      if (output_count > 0) throw InfeasibleError(g.name() + ": g(q)=0 cannot cover any output");
      return Quantity(Rational(0));
    }
    return Quantity(Rational(q) * output_count / (*gq * input_count));
  }
  const double gq = g.eval(static_cast<double>(q));
  if (!(gq > 0)) {
    if (output_count > 0) throw InfeasibleError(g.name() + ": g(q)=0 cannot cover any output");
    return Quantity(0.0);
  }
  return Quantity(static_cast<double>(q) * to_double(output_count) / (gq * to_double(input_count)));
}

// ---------------------------------------------------------------------------
// Closed-form bounds

ProblemTag tag_of(const ProblemParams& params) {
  return static_cast<ProblemTag>(params.index());
}

std::string_view tag_name(ProblemTag tag) {
  switch (tag) {
    case ProblemTag::Hd1: return "hd1";
    case ProblemTag::Triangle: return "triangle";
    case ProblemTag::Alon: return "alon";
    case ProblemTag::TwoPath: return "twopath";
    case ProblemTag::Join: return "join";
    case ProblemTag::MatMul: return "matmul";
  }
  return "?";
}

ProblemTag parse_problem_tag(std::string_view text) {
  for (auto tag : {ProblemTag::Hd1, ProblemTag::Triangle, ProblemTag::Alon, ProblemTag::TwoPath,
                   ProblemTag::Join, ProblemTag::MatMul}) {
    if (tag_name(tag) == text) return tag;
  }
  throw InvalidParameter("unknown problem tag '" + std::string(text) + "'");
}

std::uint64_t min_reducer_size(const ProblemParams& params) {
  struct Visitor {
    std::uint64_t operator()(const Hd1&) const { return 2; }
    std::uint64_t operator()(const Triangle&) const { return 3; }
    std::uint64_t operator()(const Alon&) const { return 1; }
    std::uint64_t operator()(const TwoPath&) const { return 2; }
    std::uint64_t operator()(const Join&) const { return 1; }
    std::uint64_t operator()(const MatMul& p) const { return 2 * p.n; }
  };
  return std::visit(Visitor{}, params);
}

namespace {

Quantity bound_of(const Hd1& p, std::uint64_t q) {
  if (p.b < 1) throw InvalidParameter("hd1 needs b >= 1");
  require_q(q, 2, "hd1");
  if (auto lg = exact_log2(q)) return Quantity(Rational(p.b, *lg));
  return Quantity(p.b / log2_of(q));
}

Quantity bound_of(const Triangle& p, std::uint64_t q) {
  if (p.n < 3) throw InvalidParameter("triangle needs n >= 3");
  require_q(q, 3, "triangle");
  if (auto root = exact_sqrt(Rational(2 * q))) return Quantity(Rational(p.n) / *root);
  return Quantity(static_cast<double>(p.n) / std::sqrt(2.0 * static_cast<double>(q)));
}

Quantity bound_of(const Alon& p, std::uint64_t q) {
  if (p.s < 2) throw InvalidParameter("alon needs s >= 2");
  require_q(q, 1, "alon");
  Rational x;
  if (p.edges) {
    if (*p.edges < 1) throw InvalidParameter("alon edge form needs m >= 1");
    x = Rational(*p.edges, q);
  } else {
    if (p.n < 1) throw InvalidParameter("alon needs n >= 1");
    x = Rational(BigInt(p.n) * p.n, q);
  }
  // (sqrt x)^(s-2)
  if (auto v = exact_power(x, Rational(p.s - 2, 2))) return Quantity(*v);
  return Quantity(std::pow(to_double(x), (p.s - 2) / 2.0));
}

Quantity bound_of(const TwoPath& p, std::uint64_t q) {
  if (p.n < 3) throw InvalidParameter("twopath needs n >= 3");
  require_q(q, 2, "twopath");
  const Rational raw(2 * p.n, q);
  return Quantity(raw < 1 ? Rational(1) : raw);
}

Quantity bound_of(const Join& p, std::uint64_t q) {
  if (p.n < 1 || p.m < 2) throw InvalidParameter("join needs n >= 1 and m >= 2");
  if (p.rho < 1) throw InvalidParameter("join needs rho >= 1");
  require_q(q, 1, "join");
  const Rational top = pow(Rational(p.n), p.m - 2);
  if (auto den = exact_power(Rational(q), p.rho - 1)) return Quantity(top / *den);
  return Quantity(to_double(top) / std::pow(static_cast<double>(q), to_double(p.rho - 1)));
}

Quantity bound_of(const MatMul& p, std::uint64_t q) {
  if (p.n < 1) throw InvalidParameter("matmul needs n >= 1");
  require_q(q, 2 * p.n, "matmul");
  return Quantity(Rational(BigInt(p.n) * p.n * 2, q));
}

}  // namespace

Quantity table1_bound(const ProblemParams& params, std::uint64_t q) {
  return std::visit([q](const auto& p) { return bound_of(p, q); }, params);
}

Rational sparse_scale(std::uint64_t q, std::uint64_t n, std::uint64_t m) {
  if (m == 0) throw DomainError("sparse scaling needs m > 0 edges");
  if (n < 2) throw InvalidParameter("sparse scaling needs n >= 2");
  const BigInt possible = BigInt(n) * (n - 1) / 2;
  if (BigInt(m) > possible) throw InvalidParameter("m exceeds the C(n,2) possible edges");
  return Rational(BigInt(q) * n * (n - 1), BigInt(m) * 2);
}

// ---------------------------------------------------------------------------
// Join rates

double chain_join_rate(double n, double q, unsigned relations) {
  if (!(n > 0) || !(q > 0) || relations < 1) throw DomainError("chain join rate needs n, q > 0 and N >= 1");
  return std::pow(n / std::sqrt(q), static_cast<double>(relations) - 1);
}

StarRates star_join_rate(double f, double d0, unsigned dims, double q, double e) {
  if (!(f > 0) || !(d0 > 0) || !(q > 0) || dims < 1) {
    throw DomainError("star join rate needs f, d0, q > 0 and N >= 1");
  }
  if (!(e > 0) || !(e < 1)) throw DomainError("star join rate needs 0 < e < 1");
  const double nd = dims * d0;
  const double total = f + nd;
  const double p = std::pow(nd / (e * q), dims);
  StarRates out;
  out.upper = (f + nd * std::pow(p, (dims - 1.0) / dims)) / total;
  out.lower = nd * std::pow(nd / q, dims - 1.0) / total;
  out.upper_simplified = e * (1 - e) * nd * std::pow(nd / (e * q), dims - 1.0) / total;
  return out;
}

// ---------------------------------------------------------------------------
// Cost

double cost_at(const CostModel& model, std::uint64_t q) {
  const double x = static_cast<double>(q);
  double cost = model.b * x + model.c * x * x;
  if (model.a != 0) {
    if (!model.curve) throw InvalidParameter("cost model needs a tradeoff curve when a != 0");
    cost += model.a * model.curve(x);
  }
  return cost;
}

CostOptimum optimize_cost(const CostModel& model, std::span<const std::uint64_t> domain) {
  if (domain.empty()) throw DomainError("cost optimization over an empty q domain");
  if (model.a < 0 || model.b < 0 || model.c < 0) throw InvalidParameter("cost coefficients must be nonnegative");
  std::optional<CostOptimum> best;
  for (std::uint64_t q : domain) {
    const double cost = cost_at(model, q);
    if (!std::isfinite(cost)) throw DomainError("cost is not finite at q=" + std::to_string(q));
    if (!best || cost < best->cost || (cost == best->cost && q < best->q)) best = CostOptimum{q, cost};
  }
  return *best;
}

}  // namespace mrt::bounds
