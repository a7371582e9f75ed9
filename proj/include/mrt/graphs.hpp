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
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mrt/model.hpp"

namespace mrt::graphs {

enum class Pattern { Triangle, TwoPath };

// Inputs are the C(n,2) possible undirected edges on nodes 0..n-1.
class GraphSpace final : public ProblemSpace {
 public:
  GraphSpace(std::uint32_t n, Pattern pattern);

  std::uint32_t nodes() const { return n_; }
  Pattern pattern() const { return pattern_; }

  std::string name() const override;
  std::uint64_t input_count() const override;
  std::uint64_t output_count() const override;
  std::uint64_t input_index(InputId id) const override;
  InputId input_at(std::uint64_t index) const override;
  void for_each_output(const std::function<void(const OutputId&)>& fn) const override;
  void dependency(const OutputId& output, std::vector<InputId>& deps) const override;
  void outputs_among(std::span<const InputId> inputs, std::vector<OutputId>& out) const override;

 private:
  std::uint32_t n_;
  Pattern pattern_;
};

// Simple undirected graph with sorted adjacency lists.
class Graph {
 public:
  explicit Graph(std::uint32_t n = 0);
  Graph(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  std::uint32_t nodes() const { return static_cast<std::uint32_t>(adj_.size()); }
  std::uint64_t edge_count() const { return edges_; }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;
  const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const { return adj_[v]; }
  std::vector<InputId> edge_ids() const;

 private:
  std::vector<std::vector<std::uint32_t>> adj_;
  std::uint64_t edges_ = 0;
};

// `u v` per line, 0-based ids, '#' starts a comment, blank lines ignored.
// Node count is max id + 1 unless `min_nodes` is larger. Throws ParseError
// with the offending line number.
Graph read_edge_list(std::istream& in, std::uint32_t min_nodes = 0);
void write_edge_list(std::ostream& out, const Graph& g);

// m distinct edges drawn uniformly from the C(n,2) possible ones.
Graph random_graph(std::uint32_t n, std::uint64_t m, std::mt19937_64& rng);

// Deterministic node-to-bucket hash h(v) = v mod k.
struct NodeHash {
  std::uint32_t buckets;
  std::uint32_t operator()(std::uint32_t v) const { return v % buckets; }
};

// Nodes in `groups` contiguous classes; one reducer per triple of classes
// (ranked lexicographically). A triangle is emitted only by the smallest
// triple containing all of its classes.
std::unique_ptr<MappingSchema> triangle_partition_schema(std::uint32_t n, std::uint32_t groups);

// Reducers [u, {i, j}] with buckets i < j under h(v) = v mod k; reducer id
// u * C(k,2) + rank({i,j}). Production rules: emit v-u-w iff
// {h(v), h(w)} = {i, j}, or h(v) = h(w) = x and the pair is {x, x+1 mod k}.
// k = 1 is the node-centric degenerate case: one reducer per node, r = 2.
std::unique_ptr<MappingSchema> two_path_schema(std::uint32_t n, std::uint32_t k);

enum class SamplePattern { Triangle, TwoPath, Clique, Cycle };

struct SampleCount {
  std::uint64_t count = 0;
  // One entry per instance. Triangle/Clique: sorted nodes. TwoPath: middle
  // then the two ends sorted. Cycle: node order starting at the smallest
  // node, second node smaller than the last.
  std::vector<std::vector<std::uint32_t>> witnesses;
};

// Exact backtracking enumeration of pattern instances. `size` is s for
// Clique/Cycle and ignored otherwise. Guard: n <= 60 for triangles and
// 2-paths, n <= 20 for s >= 4.
SampleCount sample_graph_oracle(const Graph& g, SamplePattern pattern, unsigned size = 3,
                                bool keep_witnesses = true);

}  // namespace mrt::graphs
