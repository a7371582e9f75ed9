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

// Minimum fractional edge cover:
//   minimize sum x_e  s.t.  sum_{e ni v} x_e >= 1 for every node v,  x >= 0.
// A vertex of the feasible region fixes some variables at zero and makes as
// many node constraints tight as there are free variables. We enumerate
// those choices, solve each square system in doubles to discard the
// singular and infeasible ones cheaply, and redo the survivors exactly.

#include <algorithm>
#include <cmath>
#include <set>

#include "mrt/bounds.hpp"
#include "mrt/error.hpp"

namespace mrt::bounds {

namespace {

constexpr std::size_t kMaxEdges = 12;
constexpr std::uint64_t kMaxSystems = 5'000'000;

using Row = std::vector<std::uint8_t>;  // incidence of one node over the edges

// Distinct node rows; duplicates give identical constraints.
std::vector<Row> constraint_rows(const Hypergraph& h) {
  std::set<Row> rows;
  for (unsigned v = 0; v < h.node_count(); ++v) {
    Row row(h.edge_count(), 0);
    bool any = false;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      if (std::find(h.edge(e).begin(), h.edge(e).end(), v) != h.edge(e).end()) {
        row[e] = 1;
        any = true;
      }
    }
    if (!any) throw InfeasibleError("node " + std::to_string(v) + " lies in no edge");
    rows.insert(row);
  }
  return {rows.begin(), rows.end()};
}

// Solves M y = 1 for the k x k system picked by (rows, cols). Returns false
// when singular.
bool solve_double(const std::vector<Row>& all, const std::vector<unsigned>& rows,
                  const std::vector<unsigned>& cols, std::vector<double>& y) {
  const std::size_t k = cols.size();
  std::vector<double> m(k * (k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i * (k + 1) + j] = all[rows[i]][cols[j]];
    m[i * (k + 1) + k] = 1.0;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(m[r * (k + 1) + c]) > std::fabs(m[piv * (k + 1) + c])) piv = r;
    if (std::fabs(m[piv * (k + 1) + c]) < 1e-9) return false;
    for (std::size_t j = 0; j <= k; ++j) std::swap(m[c * (k + 1) + j], m[piv * (k + 1) + j]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = m[r * (k + 1) + c] / m[c * (k + 1) + c];
      if (f == 0) continue;
      for (std::size_t j = c; j <= k; ++j) m[r * (k + 1) + j] -= f * m[c * (k + 1) + j];
    }
  }
  y.resize(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = m[i * (k + 1) + k] / m[i * (k + 1) + i];
  return true;
}

bool solve_exact(const std::vector<Row>& all, const std::vector<unsigned>& rows,
                 const std::vector<unsigned>& cols, std::vector<Rational>& y) {
  const std::size_t k = cols.size();
  std::vector<Rational> m(k * (k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i * (k + 1) + j] = all[rows[i]][cols[j]];
    m[i * (k + 1) + k] = 1;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && m[piv * (k + 1) + c] == 0) ++piv;
    if (piv == k) return false;
    for (std::size_t j = 0; j <= k; ++j) std::swap(m[c * (k + 1) + j], m[piv * (k + 1) + j]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r * (k + 1) + c] == 0) continue;
      const Rational f = m[r * (k + 1) + c] / m[c * (k + 1) + c];
      for (std::size_t j = c; j <= k; ++j) m[r * (k + 1) + j] -= f * m[c * (k + 1) + j];
    }
  }
  y.resize(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = m[i * (k + 1) + k] / m[i * (k + 1) + i];
  return true;
}

bool covers(const std::vector<Row>& rows, const std::vector<Rational>& x) {
  for (const Row& row : rows) {
    Rational sum = 0;
    for (std::size_t e = 0; e < x.size(); ++e)
      if (row[e]) sum += x[e];
    if (sum < 1) return false;
  }
  return true;
}

bool covers_double(const std::vector<Row>& rows, const std::vector<double>& x) {
  for (const Row& row : rows) {
    double sum = 0;
    for (std::size_t e = 0; e < x.size(); ++e)
      if (row[e]) sum += x[e];
    if (sum < 1 - 1e-7) return false;
  }
  return true;
}

// Calls fn on each k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(unsigned n, unsigned k, Fn&& fn) {
  std::vector<unsigned> idx(k);
  for (unsigned i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (unsigned j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Hypergraph::Hypergraph(unsigned node_count, std::vector<std::vector<unsigned>> edges,
                       std::vector<std::optional<double>> sizes)
    : nodes_(node_count), edges_(std::move(edges)), sizes_(std::move(sizes)) {
  if (sizes_.empty()) sizes_.resize(edges_.size());
  if (sizes_.size() != edges_.size()) throw InvalidParameter("one size per edge expected");
  for (auto& e : edges_) {
    if (e.empty()) throw InvalidParameter("hypergraph edges must be nonempty");
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw InvalidParameter("repeated node in an edge");
    if (e.back() >= nodes_) throw InvalidParameter("edge names a node out of range");
  }
  for (const auto& s : sizes_)
    if (s && !(*s >= 0)) throw InvalidParameter("relation sizes must be nonnegative");
}

Hypergraph Hypergraph::triangle() { return Hypergraph(3, {{0, 1}, {1, 2}, {0, 2}}); }

Hypergraph Hypergraph::chain(unsigned relations) {
  if (relations < 1) throw InvalidParameter("chain needs at least one relation");
  std::vector<std::vector<unsigned>> edges;
  for (unsigned i = 0; i < relations; ++i) edges.push_back({i, i + 1});
  return Hypergraph(relations + 1, std::move(edges));
}

Hypergraph Hypergraph::star(unsigned dimensions) {
  if (dimensions < 1) throw InvalidParameter("star needs at least one dimension table");
  std::vector<std::vector<unsigned>> edges;
  std::vector<unsigned> fact;
  for (unsigned i = 0; i < dimensions; ++i) fact.push_back(i);
  edges.push_back(fact);
  for (unsigned i = 0; i < dimensions; ++i) edges.push_back({i, dimensions + i});
  return Hypergraph(2 * dimensions, std::move(edges));
}

void Hypergraph::set_size(std::size_t e, double size) {
  if (!(size >= 0)) throw InvalidParameter("relation sizes must be nonnegative");
  sizes_.at(e) = size;
}

bool EdgeCover::feasible_for(const Hypergraph& h) const {
  if (weights.size() != h.edge_count()) return false;
  for (const auto& w : weights)
    if (w < 0) return false;
  for (unsigned v = 0; v < h.node_count(); ++v) {
    Rational sum = 0;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      const auto& nodes = h.edge(e);
      if (std::binary_search(nodes.begin(), nodes.end(), v)) sum += weights[e];
    }
    if (sum < 1) return false;
  }
  return true;
}

std::vector<std::vector<Rational>> basic_feasible_covers(const Hypergraph& h) {
  const std::size_t edges = h.edge_count();
  if (edges > kMaxEdges) {
    throw SizingError("hypergraph edges", edges, kMaxEdges);
  }
  const std::vector<Row> rows = constraint_rows(h);
  const unsigned nrows = static_cast<unsigned>(rows.size());

  std::uint64_t systems = 0;
  for (unsigned k = 1; k <= edges && k <= nrows; ++k) {
    systems += (binomial(static_cast<unsigned>(edges), k) * binomial(nrows, k)).convert_to<std::uint64_t>();
  }
  if (systems > kMaxSystems) throw SizingError("basic-solution systems", systems, kMaxSystems);

  std::set<std::vector<Rational>> found;
  std::vector<double> yd;
  std::vector<Rational> ye;
  for (unsigned k = 1; k <= edges && k <= nrows; ++k) {
    for_each_subset(static_cast<unsigned>(edges), k, [&](const std::vector<unsigned>& cols) {
      for_each_subset(nrows, k, [&](const std::vector<unsigned>& tight) {
        if (!solve_double(rows, tight, cols, yd)) return;
        std::vector<double> xd(edges, 0.0);
        for (unsigned j = 0; j < k; ++j) {
          if (yd[j] < -1e-7) return;
          xd[cols[j]] = yd[j];
        }
        if (!covers_double(rows, xd)) return;
        if (!solve_exact(rows, tight, cols, ye)) return;
        std::vector<Rational> x(edges, Rational(0));
        for (unsigned j = 0; j < k; ++j) {
          if (ye[j] < 0) return;
          x[cols[j]] = ye[j];
        }
        if (covers(rows, x)) found.insert(std::move(x));
      });
    });
  }
  return {found.begin(), found.end()};
}

EdgeCover fractional_edge_cover(const Hypergraph& h) {
  if (h.edge_count() == 0) {
    if (h.node_count() == 0) return {};
    throw InfeasibleError("hypergraph has nodes but no edges");
  }
  const auto candidates = basic_feasible_covers(h);
  if (candidates.empty()) throw InfeasibleError("no feasible edge cover");
  // candidates are in lexicographic order, so the first minimum wins
  EdgeCover best;
  bool have = false;
  for (const auto& x : candidates) {
    Rational total = 0;
    for (const auto& w : x) total += w;
    if (!have || total < best.rho) {
      best.weights = x;
      best.rho = total;
      have = true;
    }
  }
  return best;
}

double output_size_bound(const Hypergraph& h, const EdgeCover& cover) {
  if (cover.weights.size() != h.edge_count()) throw InvalidParameter("cover does not match hypergraph");
  if (!cover.feasible_for(h)) throw InvalidParameter("cover is not feasible for the hypergraph");
  double bound = 1.0;
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    const auto size = h.size(e);
    if (!size) throw DomainError("edge " + std::to_string(e) + " has no relation size");
    if (cover.weights[e] == 0) continue;
    bound *= std::pow(*size, to_double(cover.weights[e]));
  }
  return bound;
}

}  // namespace mrt::bounds
