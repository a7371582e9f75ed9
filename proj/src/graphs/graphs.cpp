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

#include "mrt/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "mrt/error.hpp"

namespace mrt::graphs {

namespace {

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

// colex rank of edge {u < v}
std::uint64_t edge_rank(std::uint32_t u, std::uint32_t v) { return choose2(v) + u; }

}  // namespace

// ---------------------------------------------------------------------------
// GraphSpace

GraphSpace::GraphSpace(std::uint32_t n, Pattern pattern) : n_(n), pattern_(pattern) {
  if (n < 3) throw InvalidParameter("graph space needs at least 3 nodes");
  if (n > (1u << 20)) throw InvalidParameter("graph space node count too large");
}

std::string GraphSpace::name() const {
  return std::string(pattern_ == Pattern::Triangle ? "triangles" : "two-paths") +
         "(n=" + std::to_string(n_) + ")";
}

std::uint64_t GraphSpace::input_count() const { return choose2(n_); }

std::uint64_t GraphSpace::output_count() const {
  return pattern_ == Pattern::Triangle ? choose3(n_) : 3 * choose3(n_);
}

std::uint64_t GraphSpace::input_index(InputId id) const {
  const auto [u, v] = codec::edge_nodes(id);
  if (u >= v || v >= n_) throw InvalidParameter("edge " + std::to_string(id.value) + " not in graph space");
  return edge_rank(u, v);
}

InputId GraphSpace::input_at(std::uint64_t index) const {
  auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (choose2(v) > index) --v;
  while (choose2(v + 1) <= index) ++v;
  const std::uint64_t u = index - choose2(v);
  return codec::edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
}

void GraphSpace::for_each_output(const std::function<void(const OutputId&)>& fn) const {
  for (std::uint32_t x = 0; x < n_; ++x) {
    for (std::uint32_t y = x + 1; y < n_; ++y) {
      for (std::uint32_t z = y + 1; z < n_; ++z) {
        if (pattern_ == Pattern::Triangle) {
          fn(codec::node_triple(x, y, z));
        } else {
          fn(codec::two_path(x, y, z));
          fn(codec::two_path(y, x, z));
          fn(codec::two_path(z, x, y));
        }
      }
    }
  }
}

void GraphSpace::dependency(const OutputId& output, std::vector<InputId>& deps) const {
  const auto a = static_cast<std::uint32_t>(output.parts[0]);
  const auto b = static_cast<std::uint32_t>(output.parts[1]);
  const auto c = static_cast<std::uint32_t>(output.parts[2]);
  if (pattern_ == Pattern::Triangle) {
    deps.push_back(codec::edge(a, b));
    deps.push_back(codec::edge(a, c));
    deps.push_back(codec::edge(b, c));
  } else {
    deps.push_back(codec::edge(a, b));
    deps.push_back(codec::edge(a, c));
  }
}

void GraphSpace::outputs_among(std::span<const InputId> inputs, std::vector<OutputId>& out) const {
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> adj;
  for (InputId e : inputs) {
    const auto [u, v] = codec::edge_nodes(e);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& [node, list] : adj) std::sort(list.begin(), list.end());

  if (pattern_ == Pattern::TwoPath) {
    for (const auto& [mid, list] : adj) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) out.push_back(codec::two_path(mid, list[i], list[j]));
      }
    }
    return;
  }
  std::vector<std::uint32_t> common;
  for (InputId e : inputs) {
    const auto [u, v] = codec::edge_nodes(e);
    const auto& nu = adj[u];
    const auto& nv = adj[v];
    common.clear();
    std::set_intersection(std::upper_bound(nu.begin(), nu.end(), v), nu.end(),
                          std::upper_bound(nv.begin(), nv.end(), v), nv.end(),
                          std::back_inserter(common));
    for (auto w : common) out.push_back(codec::node_triple(u, v, w));
  }
}

// ---------------------------------------------------------------------------
// Graph and I/O

Graph::Graph(std::uint32_t n) : adj_(n) {}

Graph::Graph(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) : adj_(n) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidParameter("edge endpoint out of range");
    if (u == v) throw InvalidParameter("self-loop on node " + std::to_string(u));
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    edges_ += list.size();
  }
  edges_ /= 2;
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
  if (u >= adj_.size()) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<InputId> Graph::edge_ids() const {
  std::vector<InputId> ids;
  ids.reserve(edges_);
  for (std::uint32_t u = 0; u < adj_.size(); ++u) {
    for (auto v : adj_[u]) {
      if (u < v) ids.push_back(codec::edge(u, v));
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

Graph read_edge_list(std::istream& in, std::uint32_t min_nodes) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t n = min_nodes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) throw ParseError(lineno, "expected two node ids");
    auto parse_node = [&](const std::string& tok) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
        throw ParseError(lineno, "invalid node id '" + tok + "'");
      }
      if (tok.size() > 9) throw ParseError(lineno, "node id too large");
      const unsigned long long v = std::stoull(tok);
      if (v >= (1ull << 20)) throw ParseError(lineno, "node id too large");
      return static_cast<std::uint32_t>(v);
    };
    const auto u = parse_node(a);
    const auto v = parse_node(b);
    if (u == v) throw ParseError(lineno, "self-loop on node " + a);
    edges.emplace_back(u, v);
    n = std::max({n, u + 1, v + 1});
  }
  return Graph(n, edges);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (InputId e : g.edge_ids()) {
    const auto [u, v] = codec::edge_nodes(e);
    out << u << ' ' << v << '\n';
  }
}

Graph random_graph(std::uint32_t n, std::uint64_t m, std::mt19937_64& rng) {
  const std::uint64_t possible = choose2(n);
  if (m > possible) throw InvalidParameter("more edges requested than C(n,2)");
  // selection sampling: deterministic for a given engine state
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(m);
  std::uint64_t needed = m;
  std::uint64_t seen = 0;
  for (std::uint32_t v = 1; v < n && needed > 0; ++v) {
    for (std::uint32_t u = 0; u < v && needed > 0; ++u, ++seen) {
      const std::uint64_t left = possible - seen;
      if (std::uniform_int_distribution<std::uint64_t>(0, left - 1)(rng) < needed) {
        edges.emplace_back(u, v);
        --needed;
      }
    }
  }
  return Graph(n, edges);
}

// ---------------------------------------------------------------------------
// Schemas

namespace {

class TrianglePartitionSchema final : public MappingSchema {
 public:
  TrianglePartitionSchema(std::uint32_t n, std::uint32_t groups) : n_(n), groups_(groups) {
    if (groups < 3) throw InvalidParameter("triangle partition needs at least 3 groups");
    if (groups > 200) throw InvalidParameter("too many groups");
    if (n % groups != 0) {
      throw InvalidParameter("groups=" + std::to_string(groups) + " must divide n=" + std::to_string(n));
    }
    class_size_ = n / groups;
    rank_.assign(std::size_t{groups} * groups * groups, 0);
    std::uint32_t r = 0;
    for (std::uint32_t a = 0; a < groups; ++a)
      for (std::uint32_t b = a + 1; b < groups; ++b)
        for (std::uint32_t c = b + 1; c < groups; ++c) rank_[index(a, b, c)] = r++;
  }

  std::string name() const override {
    return "triangle-partition(n=" + std::to_string(n_) + ",groups=" + std::to_string(groups_) + ")";
  }
  std::uint64_t reducer_count() const override { return choose3(groups_); }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    for (std::uint64_t i = 0; i < reducer_count(); ++i) fn(ReducerId{i});
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    const auto [u, v] = codec::edge_nodes(input);
    const std::uint32_t cu = class_of(u), cv = class_of(v);
    if (cu != cv) {
      for (std::uint32_t c = 0; c < groups_; ++c) {
        if (c != cu && c != cv) out.push_back(triple(cu, cv, c));
      }
      return;
    }
    for (std::uint32_t a = 0; a < groups_; ++a) {
      if (a == cu) continue;
      for (std::uint32_t b = a + 1; b < groups_; ++b) {
        if (b != cu) out.push_back(triple(cu, a, b));
      }
    }
  }
  std::uint64_t capacity() const override { return choose2(3 * std::uint64_t{class_size_}); }

  bool emits(ReducerId reducer, const OutputId& output) const override {
    std::array<std::uint32_t, 3> cls{class_of(static_cast<std::uint32_t>(output.parts[0])),
                                     class_of(static_cast<std::uint32_t>(output.parts[1])),
                                     class_of(static_cast<std::uint32_t>(output.parts[2]))};
    std::sort(cls.begin(), cls.end());
    auto last = std::unique(cls.begin(), cls.end());
    std::vector<std::uint32_t> chosen(cls.begin(), last);
    // pad with the smallest unused classes: the lexicographically least
    // triple containing the triangle's classes
    for (std::uint32_t c = 0; chosen.size() < 3; ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
    }
    return triple(chosen[0], chosen[1], chosen[2]) == reducer;
  }

 private:
  std::uint32_t class_of(std::uint32_t v) const { return v / class_size_; }
  std::size_t index(std::uint32_t a, std::uint32_t b, std::uint32_t c) const {
    return (std::size_t{a} * groups_ + b) * groups_ + c;
  }
  ReducerId triple(std::uint32_t a, std::uint32_t b, std::uint32_t c) const {
    std::array<std::uint32_t, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return ReducerId{rank_[index(t[0], t[1], t[2])]};
  }

  std::uint32_t n_;
  std::uint32_t groups_;
  std::uint32_t class_size_ = 0;
  std::vector<std::uint32_t> rank_;
};

class TwoPathSchema final : public MappingSchema {
 public:
  TwoPathSchema(std::uint32_t n, std::uint32_t k) : n_(n), hash_{k} {
    if (k < 1) throw InvalidParameter("2-path schema needs k >= 1");
    if (n % k != 0) throw InvalidParameter("k=" + std::to_string(k) + " must divide n=" + std::to_string(n));
    if (k > 4096) throw InvalidParameter("too many buckets");
    pairs_ = k == 1 ? 1 : choose2(k);
    rank_.assign(std::size_t{k} * k, 0);
    pair_of_.clear();
    std::uint32_t r = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
      for (std::uint32_t j = i + 1; j < k; ++j) {
        rank_[std::size_t{i} * k + j] = rank_[std::size_t{j} * k + i] = r++;
        pair_of_.emplace_back(i, j);
      }
    }
  }

  std::string name() const override {
    return "two-path(n=" + std::to_string(n_) + ",k=" + std::to_string(hash_.buckets) + ")";
  }
  std::uint64_t reducer_count() const override { return std::uint64_t{n_} * pairs_; }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    for (std::uint64_t i = 0; i < reducer_count(); ++i) fn(ReducerId{i});
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    const auto [a, b] = codec::edge_nodes(input);
    if (hash_.buckets == 1) {
      out.push_back(ReducerId{a});
      out.push_back(ReducerId{b});
      return;
    }
    // [b, {h(a), *}] and [a, {h(b), *}]
    for (auto [mid, other] : {std::pair{b, a}, std::pair{a, b}}) {
      const std::uint32_t ho = hash_(other);
      for (std::uint32_t x = 0; x < hash_.buckets; ++x) {
        if (x != ho) out.push_back(reducer(mid, ho, x));
      }
    }
  }
  std::uint64_t capacity() const override {
    return hash_.buckets == 1 ? n_ - 1 : 2 * std::uint64_t{n_} / hash_.buckets;
  }

  bool emits(ReducerId r, const OutputId& output) const override {
    const auto mid = static_cast<std::uint32_t>(output.parts[0]);
    if (r.value / pairs_ != mid) return false;
    if (hash_.buckets == 1) return true;
    const auto [i, j] = pair_of_[r.value % pairs_];
    const std::uint32_t hv = hash_(static_cast<std::uint32_t>(output.parts[1]));
    const std::uint32_t hw = hash_(static_cast<std::uint32_t>(output.parts[2]));
    if (hv != hw) return (hv == i && hw == j) || (hv == j && hw == i);
    const std::uint32_t next = (hv + 1) % hash_.buckets;
    return (hv == i && next == j) || (hv == j && next == i);
  }

 private:
  ReducerId reducer(std::uint32_t mid, std::uint32_t i, std::uint32_t j) const {
    return ReducerId{std::uint64_t{mid} * pairs_ + rank_[std::size_t{i} * hash_.buckets + j]};
  }

  std::uint32_t n_;
  NodeHash hash_;
  std::uint64_t pairs_ = 1;
  std::vector<std::uint32_t> rank_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_of_;
};

}  // namespace

std::unique_ptr<MappingSchema> triangle_partition_schema(std::uint32_t n, std::uint32_t groups) {
  return std::make_unique<TrianglePartitionSchema>(n, groups);
}

std::unique_ptr<MappingSchema> two_path_schema(std::uint32_t n, std::uint32_t k) {
  return std::make_unique<TwoPathSchema>(n, k);
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

class Enumerator {
 public:
  Enumerator(const Graph& g, bool keep) : g_(g), keep_(keep) {}

  void cliques(unsigned s) {
    std::vector<std::uint32_t> all(g_.nodes());
    std::iota(all.begin(), all.end(), 0u);
    extend_clique(all, s);
  }

  void cycles(unsigned s) {
    for (std::uint32_t start = 0; start < g_.nodes(); ++start) {
      path_.assign(1, start);
      on_path_.assign(g_.nodes(), false);
      on_path_[start] = true;
      extend_cycle(s);
    }
  }

  SampleCount result;

 private:
  void record(std::vector<std::uint32_t> nodes) {
    ++result.count;
    if (keep_) result.witnesses.push_back(std::move(nodes));
  }

  // `candidates` are nodes adjacent to every node of path_, larger than its
  // last element.
  void extend_clique(const std::vector<std::uint32_t>& candidates, unsigned s) {
    if (path_.size() == s) {
      record(path_);
      return;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::uint32_t v = candidates[i];
      std::vector<std::uint32_t> next;
      const auto& nv = g_.neighbors(v);
      std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(i) + 1, candidates.end(),
                            nv.begin(), nv.end(), std::back_inserter(next));
      path_.push_back(v);
      extend_clique(next, s);
      path_.pop_back();
    }
  }

  void extend_cycle(unsigned s) {
    const std::uint32_t start = path_.front();
    if (path_.size() == s) {
      if (g_.has_edge(path_.back(), start) && path_[1] < path_.back()) record(path_);
      return;
    }
    for (std::uint32_t v : g_.neighbors(path_.back())) {
      if (v <= start || on_path_[v]) continue;
      on_path_[v] = true;
      path_.push_back(v);
      extend_cycle(s);
      path_.pop_back();
      on_path_[v] = false;
    }
  }

  const Graph& g_;
  bool keep_;
  std::vector<std::uint32_t> path_;
  std::vector<bool> on_path_;
};

}  // namespace

SampleCount sample_graph_oracle(const Graph& g, SamplePattern pattern, unsigned size, bool keep_witnesses) {
  const bool small_pattern = pattern == SamplePattern::Triangle || pattern == SamplePattern::TwoPath ||
                             size <= 3;
  const std::uint32_t limit = small_pattern ? 60 : 20;
  if (g.nodes() > limit) throw SizingError("oracle node count n", g.nodes(), limit);

  Enumerator e(g, keep_witnesses);
  switch (pattern) {
    case SamplePattern::Triangle:
      e.cliques(3);
      break;
    case SamplePattern::Clique:
      if (size < 2) throw InvalidParameter("clique size must be at least 2");
      e.cliques(size);
      break;
    case SamplePattern::Cycle:
      if (size < 3) throw InvalidParameter("cycle length must be at least 3");
      e.cycles(size);
      break;
    case SamplePattern::TwoPath:
      for (std::uint32_t mid = 0; mid < g.nodes(); ++mid) {
        const auto& nb = g.neighbors(mid);
        for (std::size_t i = 0; i < nb.size(); ++i) {
          for (std::size_t j = i + 1; j < nb.size(); ++j) {
            ++e.result.count;
            if (keep_witnesses) e.result.witnesses.push_back({mid, nb[i], nb[j]});
          }
        }
      }
      break;
  }
  return std::move(e.result);
}

}  // namespace mrt::graphs
