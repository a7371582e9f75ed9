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

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "doctest.h"
#include "mrt/bounds.hpp"
#include "mrt/error.hpp"
#include "mrt/hamming.hpp"
#include "oracles.hpp"

using namespace mrt;
using hamming::DistanceMode;

namespace {

std::set<OutputId> as_set(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  std::set<OutputId> out;
  for (auto [u, v] : pairs) out.insert(codec::string_pair(u, v));
  return out;
}

std::vector<ReducerId> assigned(const MappingSchema& s, std::uint64_t word) {
  std::vector<ReducerId> out;
  s.assign(InputId{word}, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("HammingSpace counts") {
  CHECK(hamming::HammingSpace(3).output_count() == 12);
  CHECK(hamming::HammingSpace(10).output_count() == 5 * 1024);
  CHECK(hamming::HammingSpace(2, 2).output_count() == 2);
  CHECK(hamming::HammingSpace(4, 2).output_count() == 48);
  CHECK(hamming::HammingSpace(4, 2, DistanceMode::AtMost).output_count() == 32 + 48);
  CHECK(hamming::HammingSpace(5).input_count() == 32);
  CHECK_THROWS_AS(hamming::HammingSpace(63), InvalidParameter);
  CHECK_THROWS_AS(hamming::HammingSpace(0), InvalidParameter);
}

TEST_CASE("hd_oracle agrees with a popcount enumeration") {
  CHECK(hamming::hd_oracle(3, 1).size() == 12);
  CHECK(hamming::hd_oracle(2, 2).size() == 2);
  CHECK(hamming::hd_oracle(4, 2).size() == 48);
  for (unsigned b = 1; b <= 8; ++b) {
    for (unsigned d = 1; d <= std::min(b, 3u); ++d) {
      const auto exact = hamming::hd_oracle(b, d);
      CHECK(std::set<OutputId>(exact.begin(), exact.end()) == as_set(oracle::hamming_pairs(b, d, d)));
      const auto upto = hamming::hd_oracle(b, d, DistanceMode::AtMost);
      CHECK(std::set<OutputId>(upto.begin(), upto.end()) == as_set(oracle::hamming_pairs(b, 1, d)));
    }
  }
  CHECK_THROWS_AS(hamming::hd_oracle(17, 1), SizingError);
}

TEST_CASE("SegmentCoords") {
  hamming::SegmentCoords coords(6, 3);
  const std::uint64_t w = 0b10'01'11;
  CHECK(coords.segment(w, 0) == 0b10);
  CHECK(coords.segment(w, 1) == 0b01);
  CHECK(coords.segment(w, 2) == 0b11);
  CHECK(coords.residual(w, 0b010) == 0b1011);
  CHECK(coords.residual(w, 0b101) == 0b01);
  CHECK_THROWS_AS(hamming::SegmentCoords(7, 3), InvalidParameter);
}

TEST_CASE("WeightGrid groups and borders") {
  hamming::WeightGrid grid(8, 2, 2);  // halves of 4 bits, weights 0..4
  CHECK(grid.groups_per_dim() == 2);
  CHECK(grid.group_of(0) == 0);
  CHECK(grid.group_of(1) == 0);
  CHECK(grid.group_of(2) == 1);
  CHECK(grid.group_of(4) == 1);  // top weight folds into the last group
  CHECK_FALSE(grid.on_lower_border(0));
  CHECK(grid.on_lower_border(2));
  CHECK_FALSE(grid.on_lower_border(3));
  CHECK_FALSE(grid.on_lower_border(4));
  CHECK(grid.piece_weight(0b0111'0001, 0) == 3);
  CHECK(grid.piece_weight(0b0111'0001, 1) == 1);
  CHECK_THROWS_AS(hamming::WeightGrid(8, 2, 3), InvalidParameter);
}

TEST_CASE("splitting: small cases") {
  hamming::HammingSpace space(4);
  auto whole = hamming::splitting_schema(4, 1);
  auto r1 = verify_schema(space, *whole);
  CHECK(r1.reducers == 1);
  CHECK(r1.q_max == 16);
  CHECK(r1.replication == 1);

  auto bits = hamming::splitting_schema(4, 4);
  auto r4 = verify_schema(space, *bits);
  CHECK(r4.covered);
  CHECK(r4.q_max == 2);
  CHECK(r4.replication == 4);
  const auto profile = coverage_profile(space, *bits);
  for (auto c : profile.covered_per_reducer) CHECK(c <= 1);

  CHECK_THROWS_AS(hamming::splitting_schema(6, 4), InvalidParameter);
}

TEST_CASE("splitting: exact match with the bound for all b <= 14") {
  for (unsigned b = 1; b <= 14; ++b) {
    hamming::HammingSpace space(b);
    for (unsigned c = 1; c <= b; ++c) {
      if (b % c) continue;
      CAPTURE(b);
      CAPTURE(c);
      const auto schema = hamming::splitting_schema(b, c);
      const auto report = verify_schema(space, *schema);
      CHECK(report.covered);
      CHECK(report.replication == c);
      const std::uint64_t q = std::uint64_t{1} << (b / c);
      CHECK(std::all_of(report.loads.begin(), report.loads.end(), [&](auto l) { return l == q; }));
      if (q >= 2) {
        const auto bound = bounds::table1_bound(bounds::Hd1{b}, q);
        REQUIRE(bound.is_exact());
        CHECK(*bound.exact == report.replication);
      }
    }
  }
}

TEST_CASE("weight schema: replication rates from full enumeration") {
  // values frozen from an independent enumeration of every string
  struct Expected {
    unsigned b, d, k;
    Rational r;
  };
  const Expected cases[] = {
      {8, 2, 2, Rational(7, 4)},   {8, 2, 4, Rational(1)},       {16, 2, 2, Rational(127, 64)},
      {16, 2, 4, Rational(99, 64)}, {12, 3, 2, Rational(17, 8)}, {12, 3, 4, Rational(1)},
      {12, 2, 3, Rational(13, 8)},
  };
  for (const auto& e : cases) {
    CAPTURE(e.b);
    CAPTURE(e.d);
    CAPTURE(e.k);
    hamming::HammingSpace space(e.b);
    const auto schema = hamming::weight_schema_d(e.b, e.d, e.k);
    const auto report = verify_schema(space, *schema);
    CHECK(report.covered);
    CHECK(report.replication == e.r);
    CHECK(report.q_max == schema->capacity());
    // r in [1, 1 + d/k + 0.35]
    CHECK(report.replication >= 1);
    CHECK(to_double(report.replication) <= 1.0 + double(e.d) / e.k + 0.35);
  }
}

TEST_CASE("weight schema: d=2 matches the two-half schema") {
  const auto a = hamming::weight_schema(8, 2);
  const auto b = hamming::weight_schema_d(8, 2, 2);
  for (std::uint64_t w = 0; w < 256; ++w) CHECK(assigned(*a, w) == assigned(*b, w));
  CHECK_THROWS_AS(hamming::weight_schema(7, 1), InvalidParameter);
  CHECK_THROWS_AS(hamming::weight_schema(8, 3), InvalidParameter);
}

TEST_CASE("weight schema: weight-0 halves stay put; border halves are copied") {
  const auto s = hamming::weight_schema(8, 2);
  CHECK(assigned(*s, 0).size() == 1);
  CHECK(assigned(*s, 0b0001'0001).size() == 1);  // weights (1,1): interior of cell (0,0)
  CHECK(assigned(*s, 0b0011'0000).size() == 2);  // left weight 2 is a lower border
  CHECK(assigned(*s, 0b0011'0011).size() == 3);  // both halves on a border
  CHECK(assigned(*s, 0b1111'1111).size() == 1);  // top weight is not a border
}

TEST_CASE("weight schema: max load within the Stirling estimate") {
  // k^d 2^b (2d / (pi b))^(d/2): the central binomial coefficient of each
  // b/d-bit piece is about 2^(b/d) sqrt(2d / (pi b)).
  struct Case {
    unsigned b, d, k;
  };
  for (const auto& c : {Case{16, 2, 2}, Case{16, 2, 4}, Case{12, 3, 2}, Case{12, 2, 3}, Case{16, 4, 2}}) {
    CAPTURE(c.b);
    CAPTURE(c.d);
    CAPTURE(c.k);
    const auto report = verify_schema(hamming::HammingSpace(c.b), *hamming::weight_schema_d(c.b, c.d, c.k));
    const double estimate = std::pow(c.k, c.d) * std::ldexp(1.0, static_cast<int>(c.b)) *
                            std::pow(2.0 * c.d / (std::numbers::pi * c.b), c.d / 2.0);
    CHECK(static_cast<double>(report.q_max) <= 1.5 * estimate);
  }
}

TEST_CASE("ball-2") {
  {
    hamming::HammingSpace space(3, 2);
    const auto schema = hamming::ball2_schema(3);
    const auto profile = coverage_profile(space, *schema);
    for (auto c : profile.covered_per_reducer) CHECK(c == 3);
    CHECK(profile.outputs == 12);
    CHECK(profile.min_cover_multiplicity == 2);
    CHECK(profile.max_cover_multiplicity == 2);
  }
  {
    const auto report = verify_schema(hamming::HammingSpace(2, 2), *hamming::ball2_schema(2));
    CHECK(report.covered);
    CHECK(report.replication == 2);
    CHECK(report.q_max == 2);
  }
  {
    const auto report = verify_schema(hamming::HammingSpace(8, 2), *hamming::ball2_schema(8));
    CHECK(report.covered);
    CHECK(report.replication == 8);
    CHECK(report.q_max == 8);
  }
  {
    hamming::HammingSpace upto(6, 2, DistanceMode::AtMost);
    const auto report = verify_schema(upto, *hamming::ball2_schema(6, true));
    CHECK(report.covered);
    CHECK(report.q_max == 7);
  }
  CHECK_THROWS_AS(hamming::ball2_schema(1), InvalidParameter);
}

TEST_CASE("segment deletion") {
  const auto seg = hamming::segment_deletion_schema(4, 4, 1);
  const auto split = hamming::splitting_schema(4, 4);
  for (std::uint64_t w = 0; w < 16; ++w) CHECK(assigned(*seg, w) == assigned(*split, w));

  hamming::HammingSpace space(8, 2, DistanceMode::AtMost);
  const auto schema = hamming::segment_deletion_schema(8, 4, 2);
  const auto report = verify_schema(space, *schema);
  CHECK(report.covered);
  CHECK(report.replication == 6);
  CHECK(std::all_of(report.loads.begin(), report.loads.end(), [](auto l) { return l == 16; }));
  CHECK(space.output_count() == oracle::hamming_pairs(8, 1, 2).size());

  for (auto [b, k, d] : {std::array<unsigned, 3>{6, 3, 1}, {6, 3, 2}, {9, 3, 2}, {8, 8, 3}}) {
    const auto s = hamming::segment_deletion_schema(b, k, d);
    const auto r = verify_schema(hamming::HammingSpace(b, d, DistanceMode::AtMost), *s);
    CHECK(r.covered);
    CHECK(r.replication == Rational(binomial(k, d)));
  }
  CHECK_THROWS_AS(hamming::segment_deletion_schema(8, 4, 4), InvalidParameter);
  CHECK_THROWS_AS(hamming::segment_deletion_schema(8, 3, 1), InvalidParameter);
}
