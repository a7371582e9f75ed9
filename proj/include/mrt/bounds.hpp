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

// Lower bounds on the replication rate as a function of reducer size q, the
// fractional edge cover of a join hypergraph, closed-form join rates and a
// small cost optimizer.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrt/rational.hpp"

namespace mrt::bounds {

// g(q): the most outputs any q inputs can cover.
struct GFunction {
  enum class Family { Hd1, Triangle, TwoPath, Alon, Join, MatMul };

  Family family = Family::Hd1;
  unsigned s = 0;  // Alon: nodes of the sample graph
  Rational rho;  // Join: edge-cover number
  std::uint64_t n = 0;  // MatMul: dimension

  static GFunction hd1() { return make(Family::Hd1); }
  static GFunction triangle() { return make(Family::Triangle); }
  static GFunction two_path() { return make(Family::TwoPath); }
  static GFunction alon(unsigned s) {
    GFunction g = make(Family::Alon);
    g.s = s;
    return g;
  }
  static GFunction join(const Rational& rho) {
    GFunction g = make(Family::Join);
    g.rho = rho;
    return g;
  }
  static GFunction matmul(std::uint64_t n) {
    GFunction g = make(Family::MatMul);
    g.n = n;
    return g;
  }

  std::string name() const;
  double eval(double q) const;
  // g(q) as a rational when it is one.
  std::optional<Rational> exact(std::uint64_t q) const;

 private:
  static GFunction make(Family f) {
    GFunction g;
    g.family = f;
    return g;
  }
};

// q |O| / (g(q) |I|). Throws InfeasibleError when g(q) = 0 and |O| > 0.
Quantity recipe_bound(const GFunction& g, const Rational& input_count,
                      const Rational& output_count, std::uint64_t q);

struct Hd1 {
  unsigned b;
};
struct Triangle {
  std::uint64_t n;
};
// Sample graph on s nodes. Node form (n/sqrt q)^(s-2), or edge form
// (sqrt(m/q))^(s-2) when `edges` is set.
struct Alon {
  unsigned s;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> edges;
};
struct TwoPath {
  std::uint64_t n;
};
// Domain size n, m attributes, edge-cover number rho.
struct Join {
  std::uint64_t n;
  unsigned m;
  Rational rho;
};
struct MatMul {
  std::uint64_t n;
};

using ProblemParams = std::variant<Hd1, Triangle, Alon, TwoPath, Join, MatMul>;

enum class ProblemTag { Hd1, Triangle, Alon, TwoPath, Join, MatMul };

ProblemTag tag_of(const ProblemParams& params);
std::string_view tag_name(ProblemTag tag);
// "hd1", "triangle", "alon", "twopath", "join", "matmul". Throws
// InvalidParameter for anything else.
ProblemTag parse_problem_tag(std::string_view text);

// Smallest q at which the problem has any output coverable.
std::uint64_t min_reducer_size(const ProblemParams& params);

// The closed-form lower bound on r at reducer size q. 2n/q for 2-paths is
// clamped below at 1. Throws DomainError when q is below min_reducer_size.
Quantity table1_bound(const ProblemParams& params, std::uint64_t q);

// q n (n-1) / (2m): the dense-graph reducer size equivalent to q when only
// m of the C(n,2) edges exist.
Rational sparse_scale(std::uint64_t q, std::uint64_t n, std::uint64_t m);

// Nodes are 0..node_count-1; each edge lists its nodes.
class Hypergraph {
 public:
  Hypergraph(unsigned node_count, std::vector<std::vector<unsigned>> edges,
             std::vector<std::optional<double>> sizes = {});

  // Three binary edges on three nodes.
  static Hypergraph triangle();
  // N binary edges {i, i+1} on N+1 nodes.
  static Hypergraph chain(unsigned relations);
  // A fact edge on nodes 0..N-1 and N dimension edges {i, N+i}.
  static Hypergraph star(unsigned dimensions);

  unsigned node_count() const { return nodes_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<unsigned>& edge(std::size_t e) const { return edges_[e]; }
  unsigned arity(std::size_t e) const { return static_cast<unsigned>(edges_[e].size()); }
  std::optional<double> size(std::size_t e) const { return sizes_[e]; }
  void set_size(std::size_t e, double size);

 private:
  unsigned nodes_;
  std::vector<std::vector<unsigned>> edges_;
  std::vector<std::optional<double>> sizes_;
};

struct EdgeCover {
  std::vector<Rational> weights;
  Rational rho;

  bool feasible_for(const Hypergraph& h) const;
};

// Minimum fractional edge cover by exact enumeration of basic solutions.
// Among optima, the lexicographically smallest weight vector. At most 12
// edges. Throws InfeasibleError for an isolated node.
EdgeCover fractional_edge_cover(const Hypergraph& h);

// Every basic feasible solution of the cover LP; exposed for testing.
std::vector<std::vector<Rational>> basic_feasible_covers(const Hypergraph& h);

// prod |R_e|^{x_e}. Throws DomainError when an edge has no size.
double output_size_bound(const Hypergraph& h, const EdgeCover& cover);

// (n / sqrt q)^(N-1) for a chain of N binary relations.
double chain_join_rate(double n, double q, unsigned relations);

struct StarRates {
  double upper;  // (f + N d0 p^((N-1)/N)) / (f + N d0), p = (N d0 / (e q))^N
  double lower;  // N d0 (N d0 / q)^(N-1) / (f + N d0)
  double upper_simplified;  // e (1-e) N d0 (N d0 / (e q))^(N-1) / (f + N d0)
};

StarRates star_join_rate(double fact_size, double dimension_size, unsigned dimensions, double q,
                         double e);

struct CostModel {
  double a = 1.0;  // per unit of communication
  double b = 0.0;  // linear reducer work
  double c = 0.0;  // quadratic reducer work
  std::function<double(double)> curve;  // q -> r
};

struct CostOptimum {
  std::uint64_t q;
  double cost;
};

double cost_at(const CostModel& model, std::uint64_t q);

// Minimum of a f(q) + b q + c q^2 over `domain`; ties go to the smaller q.
// Throws DomainError for an empty domain.
CostOptimum optimize_cost(const CostModel& model, std::span<const std::uint64_t> domain);

}  // namespace mrt::bounds
