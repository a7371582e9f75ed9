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

#include <algorithm>
#include <bit>
#include <random>

#include "doctest.h"
#include "mrt/error.hpp"
#include "mrt/graphs.hpp"
#include "mrt/hamming.hpp"
#include "mrt/matmul.hpp"
#include "mrt/model.hpp"
#include "oracles.hpp"

using namespace mrt;

namespace {

// Every input to reducer 0.
class SingleReducer final : public MappingSchema {
 public:
  explicit SingleReducer(std::uint64_t q) : q_(q) {}
  std::string name() const override { return "single"; }
  std::uint64_t reducer_count() const override { return 1; }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override { fn(ReducerId{0}); }
  void assign(InputId, std::vector<ReducerId>& out) const override { out.push_back(ReducerId{0}); }
  std::uint64_t capacity() const override { return q_; }

 private:
  std::uint64_t q_;
};

// Wraps a schema with one reducer removed from both enumeration and
// assignment, or (leak=true) removed from the enumeration only.
class WithoutReducer final : public MappingSchema {
 public:
  WithoutReducer(std::unique_ptr<MappingSchema> inner, ReducerId gone, bool leak = false)
      : inner_(std::move(inner)), gone_(gone), leak_(leak) {}
  std::string name() const override { return inner_->name() + "-minus-one"; }
  std::uint64_t reducer_count() const override { return inner_->reducer_count() - 1; }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    inner_->for_each_reducer([&](ReducerId r) {
      if (r != gone_) fn(r);
    });
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    const std::size_t before = out.size();
    inner_->assign(input, out);
    if (!leak_) out.erase(std::remove(out.begin() + static_cast<std::ptrdiff_t>(before), out.end(), gone_), out.end());
  }
  std::uint64_t capacity() const override { return inner_->capacity(); }

 private:
  std::unique_ptr<MappingSchema> inner_;
  ReducerId gone_;
  bool leak_;
};

std::vector<InputId> random_subset(const ProblemSpace& space, std::mt19937_64& rng, double keep) {
  std::bernoulli_distribution coin(keep);
  std::vector<InputId> out;
  space.for_each_input([&](InputId id) {
    if (coin(rng)) out.push_back(id);
  });
  return out;
}

}  // namespace

TEST_CASE("codecs round-trip and reject bad arguments") {
  CHECK(codec::bits(0b1011, 4).value == 0b1011);
  CHECK_THROWS_AS(codec::bits(0, 63), InvalidParameter);
  CHECK_THROWS_AS(codec::bits(16, 4), InvalidParameter);

  const InputId e = codec::edge(7, 3);
  CHECK(codec::edge_nodes(e) == std::pair<std::uint32_t, std::uint32_t>{3, 7});
  CHECK(codec::edge(3, 7) == e);
  CHECK_THROWS_AS(codec::edge(4, 4), InvalidParameter);

  for (auto tag : {codec::MatrixTag::R, codec::MatrixTag::S}) {
    const auto id = codec::matrix_entry(tag, 5, 9);
    CHECK(codec::matrix_entry_of(id) == codec::MatrixEntry{tag, 5, 9});
  }

  CHECK(codec::string_pair(9, 2) == codec::string_pair(2, 9));
  CHECK(codec::node_triple(4, 1, 3).parts == std::array<std::uint64_t, 3>{1, 3, 4});
  CHECK_THROWS_AS(codec::node_triple(1, 1, 2), InvalidParameter);
  CHECK(codec::two_path(5, 9, 2).parts == std::array<std::uint64_t, 3>{5, 2, 9});
}

TEST_CASE("rational rendering") {
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(to_decimal(Rational(2, 3)) == "0.666667");
  CHECK(to_decimal(Rational(-1, 8), 2) == "-0.13");
  CHECK(to_decimal(Rational(1, 2), 0) == "1");
  CHECK(exact_sqrt(Rational(9, 4)) == Rational(3, 2));
  CHECK_FALSE(exact_sqrt(Rational(2)).has_value());
  CHECK(exact_log2(1024) == 10u);
  CHECK_FALSE(exact_log2(12).has_value());
  CHECK(binomial(8, 2) == 28);
}

TEST_CASE("verify_schema: splitting b=4 c=2") {
  hamming::HammingSpace space(4);
  const auto schema = hamming::splitting_schema(4, 2);
  const auto report = verify_schema(space, *schema);
  CHECK(report.covered);
  CHECK_FALSE(report.uncovered_witness.has_value());
  CHECK(report.reducers == 8);
  CHECK(report.q_max == 4);
  CHECK(report.replication == 2);
  CHECK(report.capacity_respected());
}

TEST_CASE("verify_schema: one reducer holding everything") {
  hamming::HammingSpace space(2);
  SingleReducer schema(4);
  const auto report = verify_schema(space, schema);
  CHECK(report.covered);
  CHECK(report.replication == 1);
  CHECK(report.q_max == 4);
}

TEST_CASE("verify_schema: deleting a reducer exposes an uncovered pair") {
  hamming::HammingSpace space(3);
  // group index 1 is the middle segment; residual 0 keeps "0?0"
  const ReducerId gone{(1u << 2) | 0u};
  WithoutReducer schema(hamming::splitting_schema(3, 3), gone);
  const auto report = verify_schema(space, schema);
  REQUIRE_FALSE(report.covered);
  REQUIRE(report.uncovered_witness.has_value());
  const auto& w = report.uncovered_witness->parts;
  CHECK((w[0] ^ w[1]) == 0b010);
  CHECK(std::min(w[0], w[1]) == 0b000);
}

TEST_CASE("verify_schema: integrity and sizing errors") {
  hamming::HammingSpace space(3);
  WithoutReducer leaky(hamming::splitting_schema(3, 3), ReducerId{0}, true);
  CHECK_THROWS_AS(verify_schema(space, leaky), SchemaIntegrityError);

  hamming::HammingSpace big(10);
  const auto schema = hamming::splitting_schema(10, 2);
  try {
    verify_schema(big, *schema, VerifyOptions{100});
    FAIL("expected a sizing error");
  } catch (const SizingError& e) {
    CHECK_FALSE(e.count_name().empty());
  }
}

TEST_CASE("replication_rate") {
  const std::vector<std::uint64_t> even{2, 2, 2, 2};
  CHECK(replication_rate(even, 4) == 2);
  CHECK(replication_rate(even, 3) == Rational(8, 3));
  CHECK_THROWS_AS(replication_rate(even, 0), DomainError);

  hamming::HammingSpace space(6);
  const auto report = verify_schema(space, *hamming::splitting_schema(6, 3));
  CHECK(replication_rate(report.loads, 64) == 3);
}

TEST_CASE("execute: full and empty HD-1 instances") {
  hamming::HammingSpace space(4);
  const auto schema = hamming::splitting_schema(4, 2);
  const auto full = execute(Instance::full(space), *schema);
  CHECK(full.outputs.size() == 32);
  CHECK(full.stats.pairs == 32);
  CHECK(full.outputs.size() == oracle::hamming_pairs(4, 1, 1).size());

  const auto none = execute(Instance::empty(space), *schema);
  CHECK(none.outputs.empty());
  CHECK(none.stats.pairs == 0);
}

TEST_CASE("execute: a single forced triangle") {
  graphs::GraphSpace space(4, graphs::Pattern::Triangle);
  const Instance inst(space, {codec::edge(1, 2), codec::edge(2, 3), codec::edge(1, 3)});
  const auto result = execute(inst, *graphs::triangle_partition_schema(4, 4));
  REQUIRE(result.outputs.size() == 1);
  CHECK(result.outputs[0] == codec::node_triple(1, 2, 3));
}

TEST_CASE("oracle_outputs on full instances") {
  hamming::HammingSpace h3(3);
  CHECK(oracle_outputs(Instance::full(h3)).size() == 12);
  graphs::GraphSpace tri(5, graphs::Pattern::Triangle);
  CHECK(oracle_outputs(Instance::full(tri)).size() == 10);
  graphs::GraphSpace paths(4, graphs::Pattern::TwoPath);
  CHECK(oracle_outputs(Instance::full(paths)).size() == 12);
}

TEST_CASE("Instance rejects inputs outside the universe") {
  hamming::HammingSpace space(3);
  CHECK_THROWS_AS(Instance(space, {InputId{8}}), InvalidParameter);
  const Instance dup(space, {InputId{3}, InputId{1}, InputId{3}});
  CHECK(dup.present().size() == 2);
}

namespace {

struct Case {
  std::unique_ptr<ProblemSpace> space;
  std::unique_ptr<MappingSchema> schema;
};

std::vector<Case> schema_matrix() {
  std::vector<Case> cases;
  auto add = [&](std::unique_ptr<ProblemSpace> s, std::unique_ptr<MappingSchema> m) {
    cases.push_back({std::move(s), std::move(m)});
  };
  using hamming::DistanceMode;
  add(std::make_unique<hamming::HammingSpace>(6), hamming::splitting_schema(6, 2));
  add(std::make_unique<hamming::HammingSpace>(6), hamming::splitting_schema(6, 3));
  add(std::make_unique<hamming::HammingSpace>(8), hamming::weight_schema(8, 2));
  add(std::make_unique<hamming::HammingSpace>(9), hamming::weight_schema_d(9, 3, 1));
  add(std::make_unique<hamming::HammingSpace>(6, 2), hamming::ball2_schema(6));
  add(std::make_unique<hamming::HammingSpace>(6, 2, DistanceMode::AtMost), hamming::ball2_schema(6, true));
  add(std::make_unique<hamming::HammingSpace>(8, 2, DistanceMode::AtMost), hamming::segment_deletion_schema(8, 4, 2));
  add(std::make_unique<graphs::GraphSpace>(12, graphs::Pattern::Triangle), graphs::triangle_partition_schema(12, 4));
  add(std::make_unique<graphs::GraphSpace>(9, graphs::Pattern::TwoPath), graphs::two_path_schema(9, 3));
  add(std::make_unique<graphs::GraphSpace>(8, graphs::Pattern::TwoPath), graphs::two_path_schema(8, 1));
  add(std::make_unique<matmul::MatMulSpace>(6), matmul::one_phase_schema(6, 2));
  return cases;
}

}  // namespace

TEST_CASE("coverage, accounting identity and determinism over the schema matrix") {
  for (const auto& c : schema_matrix()) {
    CAPTURE(c.schema->name());
    const auto report = verify_schema(*c.space, *c.schema);
    CHECK(report.covered);
    CHECK(report.capacity_respected());
    CHECK(report.replication * report.input_count == report.total_load);

    const auto full = execute(Instance::full(*c.space), *c.schema);
    CHECK(full.stats.pairs == report.total_load);
    CHECK(full.stats.max_load == report.q_max);

    std::vector<ReducerId> a, b;
    c.space->for_each_input([&](InputId id) {
      a.clear();
      b.clear();
      c.schema->assign(id, a);
      c.schema->assign(id, b);
      CHECK(a == b);
    });
  }
}

TEST_CASE("execution equals the oracle on random instances, any thread count") {
  std::mt19937_64 rng(7);
  for (const auto& c : schema_matrix()) {
    CAPTURE(c.schema->name());
    for (double keep : {0.0, 0.3, 0.7, 1.0}) {
      const Instance inst(*c.space, random_subset(*c.space, rng, keep));
      const auto expected = oracle_outputs(inst);
      const auto serial = execute(inst, *c.schema);
      const auto parallel = execute(inst, *c.schema, ExecuteOptions{kDefaultCeiling, 3});
      CHECK(serial.outputs == expected);
      CHECK(parallel.outputs == expected);
      CHECK(parallel.stats.pairs == serial.stats.pairs);
      CHECK(parallel.stats.max_load == serial.stats.max_load);
    }
  }
}

TEST_CASE("oracle_outputs matches an independent enumeration") {
  std::mt19937_64 rng(11);
  graphs::GraphSpace tri(10, graphs::Pattern::Triangle);
  graphs::GraphSpace paths(10, graphs::Pattern::TwoPath);
  for (int round = 0; round < 10; ++round) {
    const auto present = random_subset(tri, rng, 0.4);
    std::vector<oracle::Edge> edges;
    for (auto id : present) edges.push_back(codec::edge_nodes(id));
    const auto es = oracle::edge_set(edges);
    CHECK(oracle_outputs(Instance(tri, present)).size() == oracle::triangles(10, es).size());
    CHECK(oracle_outputs(Instance(paths, present)).size() == oracle::two_paths(10, es).size());
  }
}

TEST_CASE("oracle_outputs honours the sizing guard") {
  hamming::HammingSpace space(12);
  CHECK_THROWS_AS(oracle_outputs(Instance::full(space), 1000), SizingError);
}
