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
#include <set>
#include <sstream>

#include "doctest.h"
#include "mrt/error.hpp"
#include "mrt/matmul.hpp"
#include "oracles.hpp"

using namespace mrt;
using namespace mrt::matmul;

namespace {

template <class T>
std::vector<T> flat(const SquareMatrix<T>& m) {
  return std::vector<T>(m.data(), m.data() + std::size_t{m.n()} * m.n());
}

template <class T>
bool equals_oracle(const SquareMatrix<T>& r, const SquareMatrix<T>& s, const SquareMatrix<T>& t) {
  return flat(t) == oracle::multiply(flat(r), flat(s), r.n());
}

RealMatrix random_real(std::uint32_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealMatrix m(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) m.at(i, j) = dist(rng);
  return m;
}

std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

}  // namespace

TEST_CASE("MatMulSpace") {
  MatMulSpace space(5);
  CHECK(space.input_count() == 50);
  CHECK(space.output_count() == 25);
  std::vector<InputId> deps;
  space.dependency(codec::matrix_cell(2, 3), deps);
  CHECK(deps.size() == 10);
  for (std::uint64_t i = 0; i < space.input_count(); ++i) CHECK(space.input_index(space.input_at(i)) == i);
  CHECK_THROWS_AS(space.input_index(codec::matrix_entry(codec::MatrixTag::R, 5, 0)), InvalidParameter);
}

TEST_CASE("one-phase schema: replication and coverage") {
  {
    const auto report = verify_schema(MatMulSpace(4), *one_phase_schema(4, 4));
    CHECK(report.reducers == 1);
    CHECK(report.replication == 1);
    CHECK(report.q_max == 32);
  }
  {
    const auto report = verify_schema(MatMulSpace(4), *one_phase_schema(4, 2));
    CHECK(report.reducers == 4);
    CHECK(report.q_max == 16);
    CHECK(report.replication == 2);
  }
  for (std::uint32_t n : {8u, 12u}) {
    MatMulSpace space(n);
    for (auto s : divisors(n)) {
      const auto schema = one_phase_schema(n, s);
      const auto report = verify_schema(space, *schema);
      CHECK(report.covered);
      CHECK(report.replication * report.q_max == 2 * n * n);
      CHECK(report.replication == Rational(n, s));
      const auto profile = coverage_profile(space, *schema);
      CHECK(profile.min_cover_multiplicity == 1);
      CHECK(profile.max_cover_multiplicity == 1);
    }
  }
  CHECK_THROWS_AS(one_phase_schema(8, 3), InvalidParameter);
}

TEST_CASE("one-phase schema: each reducer covers a full rectangle") {
  const std::uint32_t n = 6, s = 2;
  MatMulSpace space(n);
  const auto schema = one_phase_schema(n, s);
  std::map<std::uint64_t, std::vector<InputId>> inbox;
  std::vector<ReducerId> targets;
  space.for_each_input([&](InputId id) {
    targets.clear();
    schema->assign(id, targets);
    for (auto r : targets) inbox[r.value].push_back(id);
  });
  for (auto& [reducer, inputs] : inbox) {
    std::sort(inputs.begin(), inputs.end());
    std::vector<OutputId> cells;
    space.outputs_among(inputs, cells);
    std::set<std::uint64_t> rows, cols;
    for (const auto& c : cells) {
      rows.insert(c.parts[0]);
      cols.insert(c.parts[1]);
    }
    CHECK(cells.size() == rows.size() * cols.size());
    CHECK(rows.size() == s);
    CHECK(cols.size() == s);
    CHECK(*rows.begin() % s == 0);
    CHECK(*rows.rbegin() - *rows.begin() == s - 1);
  }
}

TEST_CASE("one-phase execution equals the oracle") {
  std::mt19937_64 rng(1);
  for (int seed = 0; seed < 20; ++seed) {
    const auto r = random_int_matrix(8, rng), s = random_int_matrix(8, rng);
    for (std::uint32_t g : {1u, 2u, 4u, 8u}) {
      const auto out = one_phase_execute(r, s, g, seed % 3 + 1);
      CHECK(equals_oracle(r, s, out.product));
      CHECK(out.reducers == (8 / g) * (8 / g));
      CHECK(out.max_load == 2 * g * 8);
      CHECK(out.pairs == (8 / g) * 2 * 64);
    }
  }
  const auto id = IntMatrix::identity(4);
  CHECK(one_phase_execute(id, id, 2).product == id);
}

TEST_CASE("floating point products agree to 1e-9 relative") {
  std::mt19937_64 rng(2);
  const auto r = random_real(12, rng), s = random_real(12, rng);
  const auto ref = reference_product(r, s);
  const auto one = one_phase_execute(r, s, 4).product;
  const auto two = two_phase_execute(r, s, TwoPhasePlan{6, 3}).product;
  for (std::uint32_t i = 0; i < 12; ++i)
    for (std::uint32_t k = 0; k < 12; ++k) {
      const double scale = std::max(1.0, std::fabs(ref.at(i, k)));
      CHECK(std::fabs(one.at(i, k) - ref.at(i, k)) <= 1e-9 * scale);
      CHECK(std::fabs(two.at(i, k) - ref.at(i, k)) <= 1e-9 * scale);
    }
}

TEST_CASE("two-phase: product and communication for every plan") {
  const std::uint32_t n = 8;
  std::mt19937_64 rng(4);
  for (auto s : divisors(n)) {
    for (auto t : divisors(n)) {
      CAPTURE(s);
      CAPTURE(t);
      const TwoPhasePlan plan{s, t};
      const auto r = random_int_matrix(n, rng), m = random_int_matrix(n, rng);
      const auto out = two_phase_execute(r, m, plan, (s + t) % 4 + 1);
      CHECK(equals_oracle(r, m, out.product));
      CHECK(out.comm.phase1 == 2ull * n * n * n / s);
      CHECK(out.comm.phase2 == 1ull * n * n * n / t);
      CHECK(out.comm.handoff == 0);
      CHECK(out.comm.total == two_phase_total(n, plan));
      CHECK(out.comm.phase1 == out.comm.predicted_phase1);
      CHECK(out.comm.phase2 == out.comm.predicted_phase2);
      CHECK(out.comm.phase1_reducers == (n / s) * (n / s) * (n / t));
      CHECK(out.comm.phase1_max_load == plan.q());
      CHECK(out.comm.phase2_max_load == n / t);
    }
  }
  const auto id = IntMatrix::identity(8);
  CHECK(two_phase_execute(id, id, TwoPhasePlan{8, 2}).product == id);
}

TEST_CASE("two-phase: results do not depend on the thread count") {
  std::mt19937_64 rng(9);
  const auto r = random_int_matrix(12, rng), s = random_int_matrix(12, rng);
  const auto a = two_phase_execute(r, s, TwoPhasePlan{4, 3}, 1);
  const auto b = two_phase_execute(r, s, TwoPhasePlan{4, 3}, 5);
  CHECK(a.product == b.product);
  CHECK(a.comm.total == b.comm.total);
}

TEST_CASE("two-phase plan search") {
  const auto plan = two_phase_plan(8, 32);
  CHECK(plan == TwoPhasePlan{8, 2});
  CHECK(two_phase_total(8, plan) == 384);
  CHECK(two_phase_total(8, TwoPhasePlan{4, 4}) == 384);  // tie, the larger s wins
  CHECK(two_phase_total(8, plan) * 4 == 3 * 512);
  CHECK(two_phase_plan(4, 32) == TwoPhasePlan{4, 4});
  CHECK_THROWS_AS(two_phase_plan(8, 1), InfeasibleError);

  // exhaustive scan
  for (std::uint64_t q : {2ull, 8ull, 18ull, 32ull, 50ull, 128ull}) {
    std::uint64_t best = ~0ull;
    for (auto s : divisors(12))
      for (auto t : divisors(12))
        if (2ull * s * t <= q) best = std::min(best, two_phase_total(12, TwoPhasePlan{s, t}));
    CHECK(two_phase_total(12, two_phase_plan(12, q)) == best);
  }
}

TEST_CASE("continuous two-phase optimum has s = 2t") {
  // minimize 2/s + 1/t subject to 2st = q
  for (double q : {32.0, 100.0, 1000.0}) {
    double best_s = 0, best = 1e300;
    for (double s = 0.5; s <= q; s += 1e-3) {
      const double t = q / (2 * s);
      const double cost = 2 / s + 1 / t;
      if (cost < best) {
        best = cost;
        best_s = s;
      }
    }
    CHECK(best_s == doctest::Approx(std::sqrt(q)).epsilon(1e-3));
    CHECK(best_s / (q / (2 * best_s)) == doctest::Approx(2.0).epsilon(1e-3));
  }
}

TEST_CASE("crossover") {
  const auto above = crossover_check(8, 128);
  CHECK(above.one_phase_ideal == doctest::Approx(128));
  CHECK(above.two_phase_ideal == doctest::Approx(181.02).epsilon(1e-3));
  CHECK(above.ideal_winner == Method::OnePhase);

  const auto below = crossover_check(8, 32);
  CHECK(below.one_phase_ideal == doctest::Approx(512));
  CHECK(below.two_phase_ideal == doctest::Approx(362.04).epsilon(1e-3));
  CHECK(below.ideal_winner == Method::TwoPhase);
  CHECK(below.one_phase_achieved == 512u);
  CHECK(below.two_phase_achieved == 384u);
  CHECK(below.achieved_winner == Method::TwoPhase);

  const auto tie = crossover_check(8, 64);
  CHECK(tie.ideal_winner == Method::Tie);
  CHECK(tie.one_phase_ideal == doctest::Approx(tie.two_phase_ideal));

  // divisor-grid dominance where one phase is exactly feasible (q = 2sn)
  for (std::uint32_t n : {8u, 12u}) {
    for (auto s : divisors(n)) {
      const std::uint64_t q = 2ull * s * n;
      const auto rec = crossover_check(n, q);
      REQUIRE(rec.achieved_winner.has_value());
      if (q < std::uint64_t{n} * n) CHECK(*rec.achieved_winner == Method::TwoPhase);
      if (q > std::uint64_t{n} * n) CHECK(*rec.achieved_winner == Method::OnePhase);
      CHECK(static_cast<double>(*rec.two_phase_achieved) <= 1.5 * rec.two_phase_ideal);
    }
  }
}

TEST_CASE("matrix text format") {
  std::istringstream in("3\n1 2 3\n4 5 6\n\n7 8 9\n");
  const auto m = read_int_matrix(in);
  CHECK(m.at(2, 1) == 8);
  std::ostringstream out;
  write_matrix(out, m);
  CHECK(out.str() == "3\n1 2 3\n4 5 6\n7 8 9\n");

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream bad(text);
    try {
      read_int_matrix(bad);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("2\n1 2\n3\n") == 3);
  CHECK(line_of("2\n1 2\n3 x\n") == 3);
  CHECK(line_of("2\n1 2 3\n3 4\n") == 2);
  CHECK(line_of("two\n") == 1);
  CHECK(line_of("2\n1 2\n3 4\n5 6\n") == 4);
  CHECK(line_of("2\n1.5 2\n3 4\n") == 2);

  std::istringstream real("2\n0.5 1e-3\n-2 3\n");
  CHECK(read_real_matrix(real).at(0, 1) == doctest::Approx(1e-3));
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(two_phase_execute(IntMatrix(4), IntMatrix(3), TwoPhasePlan{1, 1}), InvalidParameter);
  CHECK_THROWS_AS(one_phase_execute(IntMatrix(4), IntMatrix(4), 3), InvalidParameter);
}
