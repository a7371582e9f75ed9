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

// n x n matrix multiplication T = R S as a map-reduce problem: the one-round
// tiled schema and the two-round partial-sum pipeline.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "mrt/model.hpp"

namespace mrt::matmul {

// Inputs: the 2n^2 entries r_ij and s_jk. Outputs: the n^2 cells t_ik,
// each depending on row i of R and column k of S.
class MatMulSpace final : public ProblemSpace {
 public:
  explicit MatMulSpace(std::uint32_t n);

  std::uint32_t n() const { return n_; }

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
};

template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::uint32_t n) : n_(n), data_(std::size_t{n} * n, T{}) {}

  static SquareMatrix identity(std::uint32_t n) {
    SquareMatrix m(n);
    for (std::uint32_t i = 0; i < n; ++i) m.at(i, i) = T{1};
    return m;
  }

  std::uint32_t n() const { return n_; }
  T& at(std::uint32_t i, std::uint32_t j) { return data_[std::size_t{i} * n_ + j]; }
  const T& at(std::uint32_t i, std::uint32_t j) const { return data_[std::size_t{i} * n_ + j]; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::uint32_t n_ = 0;
  std::vector<T> data_;
};

using IntMatrix = SquareMatrix<std::int64_t>;
using RealMatrix = SquareMatrix<double>;

// Text format: first line n, then n rows of n whitespace-separated numbers.
// Throws ParseError with the line number.
IntMatrix read_int_matrix(std::istream& in);
RealMatrix read_real_matrix(std::istream& in);
void write_matrix(std::ostream& out, const IntMatrix& m);
void write_matrix(std::ostream& out, const RealMatrix& m);

IntMatrix random_int_matrix(std::uint32_t n, std::mt19937_64& rng, std::int64_t lo = -9,
                            std::int64_t hi = 9);

// Plain triple loop, no tiling or kernels.
template <class T>
SquareMatrix<T> reference_product(const SquareMatrix<T>& r, const SquareMatrix<T>& s);

// (n/s)^2 reducers, one per (row group, column group); reducer id
// row_group * (n/s) + col_group. q = 2sn, r = n/s.
std::unique_ptr<MappingSchema> one_phase_schema(std::uint32_t n, std::uint32_t s);

template <class T>
struct OnePhaseResult {
  SquareMatrix<T> product;
  std::uint64_t pairs = 0;
  std::uint64_t reducers = 0;
  std::uint64_t max_load = 0;
};

template <class T>
OnePhaseResult<T> one_phase_execute(const SquareMatrix<T>& r, const SquareMatrix<T>& s,
                                    std::uint32_t group, unsigned threads = 1);

// Phase-1 reducers cover s x s x t index cubes (s rows of R, s columns of S,
// t values of j).
struct TwoPhasePlan {
  std::uint32_t s = 0;
  std::uint32_t t = 0;

  std::uint64_t q() const { return 2 * std::uint64_t{s} * t; }
  bool operator==(const TwoPhasePlan&) const = default;
};

// 2n^3/s + n^3/t for a plan with s | n and t | n.
std::uint64_t two_phase_total(std::uint32_t n, TwoPhasePlan plan);

// Cheapest (s, t) with s | n, t | n and 2st <= q; ties go to the larger s.
// Throws InfeasibleError when no pair fits.
TwoPhasePlan two_phase_plan(std::uint32_t n, std::uint64_t q);

struct CommBreakdown {
  std::uint64_t phase1 = 0;  // mapper -> phase-1 reducer pairs
  std::uint64_t handoff = 0;  // phase-1 reducer -> phase-2 mapper (co-located)
  std::uint64_t phase2 = 0;  // partial sums shipped to phase-2 reducers
  std::uint64_t total = 0;
  std::uint64_t predicted_phase1 = 0;  // 2n^3/s
  std::uint64_t predicted_phase2 = 0;  // n^3/t
  std::uint64_t phase1_reducers = 0;
  std::uint64_t phase1_max_load = 0;
  std::uint64_t phase2_max_load = 0;
};

template <class T>
struct TwoPhaseResult {
  SquareMatrix<T> product;
  CommBreakdown comm;
};

template <class T>
TwoPhaseResult<T> two_phase_execute(const SquareMatrix<T>& r, const SquareMatrix<T>& s,
                                    TwoPhasePlan plan, unsigned threads = 1);

enum class Method { OnePhase, TwoPhase, Tie };

struct CrossoverRecord {
  std::uint32_t n = 0;
  std::uint64_t q = 0;
  double one_phase_ideal = 0;  // 4n^4/q
  double two_phase_ideal = 0;  // 4n^3/sqrt(q)
  Method ideal_winner = Method::Tie;  // decided exactly: q vs n^2
  std::optional<std::uint64_t> one_phase_achieved;  // largest s | n with 2sn <= q
  std::optional<std::uint32_t> one_phase_group;
  std::optional<std::uint64_t> two_phase_achieved;  // best divisor plan
  std::optional<TwoPhasePlan> two_phase_plan;
  std::optional<Method> achieved_winner;
};

CrossoverRecord crossover_check(std::uint32_t n, std::uint64_t q);

}  // namespace mrt::matmul
