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

#include "mrt/matmul.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mrt/error.hpp"
#include "mrt/kernels.hpp"

namespace mrt::matmul {

using codec::MatrixTag;

namespace {

void check_dimension(std::uint32_t n) {
  if (n < 1 || n > 4096) throw InvalidParameter("matrix dimension must be in [1, 4096]");
}

void check_divides(std::uint32_t part, std::uint32_t n, const char* what) {
  if (part < 1 || n % part != 0) {
    throw InvalidParameter(std::string(what) + "=" + std::to_string(part) + " must divide n=" + std::to_string(n));
  }
}

template <class T>
void check_pair(const SquareMatrix<T>& r, const SquareMatrix<T>& s) {
  if (r.n() != s.n()) throw InvalidParameter("dimension mismatch between R and S");
  check_dimension(r.n());
}

std::uint64_t cube(std::uint64_t n) { return n * n * n; }

// Runs body(i) for i in [0, count) on up to `threads` workers, strided.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) body(i);
    });
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MatMulSpace

MatMulSpace::MatMulSpace(std::uint32_t n) : n_(n) { check_dimension(n); }

std::string MatMulSpace::name() const { return "matmul(n=" + std::to_string(n_) + ")"; }

std::uint64_t MatMulSpace::input_count() const { return 2 * std::uint64_t{n_} * n_; }

std::uint64_t MatMulSpace::output_count() const { return std::uint64_t{n_} * n_; }

std::uint64_t MatMulSpace::input_index(InputId id) const {
  const auto e = codec::matrix_entry_of(id);
  if (e.row >= n_ || e.col >= n_ || static_cast<std::uint64_t>(e.tag) > 1) {
    throw InvalidParameter("matrix entry " + std::to_string(id.value) + " not in space");
  }
  if (codec::matrix_entry(e.tag, e.row, e.col) != id) throw InvalidParameter("malformed matrix entry id");
  return static_cast<std::uint64_t>(e.tag) * n_ * n_ + std::uint64_t{e.row} * n_ + e.col;
}

InputId MatMulSpace::input_at(std::uint64_t index) const {
  const std::uint64_t nn = std::uint64_t{n_} * n_;
  const auto tag = static_cast<MatrixTag>(index / nn);
  const std::uint64_t rest = index % nn;
  return codec::matrix_entry(tag, static_cast<std::uint32_t>(rest / n_), static_cast<std::uint32_t>(rest % n_));
}

void MatMulSpace::for_each_output(const std::function<void(const OutputId&)>& fn) const {
  for (std::uint32_t i = 0; i < n_; ++i)
    for (std::uint32_t k = 0; k < n_; ++k) fn(codec::matrix_cell(i, k));
}

void MatMulSpace::dependency(const OutputId& output, std::vector<InputId>& deps) const {
  const auto i = static_cast<std::uint32_t>(output.parts[0]);
  const auto k = static_cast<std::uint32_t>(output.parts[1]);
  for (std::uint32_t j = 0; j < n_; ++j) deps.push_back(codec::matrix_entry(MatrixTag::R, i, j));
  for (std::uint32_t j = 0; j < n_; ++j) deps.push_back(codec::matrix_entry(MatrixTag::S, j, k));
}

void MatMulSpace::outputs_among(std::span<const InputId> inputs, std::vector<OutputId>& out) const {
  std::vector<std::uint32_t> row_fill(n_, 0), col_fill(n_, 0);
  for (InputId id : inputs) {
    const auto e = codec::matrix_entry_of(id);
    if (e.tag == MatrixTag::R) {
      ++row_fill[e.row];
    } else {
      ++col_fill[e.col];
    }
  }
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (row_fill[i] != n_) continue;
    for (std::uint32_t k = 0; k < n_; ++k) {
      if (col_fill[k] == n_) out.push_back(codec::matrix_cell(i, k));
    }
  }
}

// ---------------------------------------------------------------------------
// Matrices

namespace {

template <class T>
SquareMatrix<T> read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_content_line()) throw ParseError(lineno + 1, "missing dimension line");
  std::istringstream head(line);
  long long n = 0;
  std::string extra;
  if (!(head >> n) || (head >> extra) || n < 1 || n > 4096) throw ParseError(lineno, "invalid dimension");
  SquareMatrix<T> m(static_cast<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < m.n(); ++i) {
    if (!next_content_line()) throw ParseError(lineno + 1, "missing matrix row " + std::to_string(i));
    std::istringstream row(line);
    for (std::uint32_t j = 0; j < m.n(); ++j) {
      std::string tok;
      if (!(row >> tok)) throw ParseError(lineno, "row has fewer than " + std::to_string(n) + " entries");
      std::istringstream conv(tok);
      T v{};
      char junk = 0;
      if (!(conv >> v) || (conv >> junk)) throw ParseError(lineno, "invalid number '" + tok + "'");
      m.at(i, j) = v;
    }
    if (row >> extra) throw ParseError(lineno, "row has more than " + std::to_string(n) + " entries");
  }
  if (next_content_line()) throw ParseError(lineno, "trailing content after matrix");
  return m;
}

template <class T>
void write_any(std::ostream& out, const SquareMatrix<T>& m) {
  out << m.n() << '\n';
  for (std::uint32_t i = 0; i < m.n(); ++i) {
    for (std::uint32_t j = 0; j < m.n(); ++j) out << (j ? " " : "") << m.at(i, j);
    out << '\n';
  }
}

}  // namespace

IntMatrix read_int_matrix(std::istream& in) { return read_matrix<std::int64_t>(in); }
RealMatrix read_real_matrix(std::istream& in) { return read_matrix<double>(in); }
void write_matrix(std::ostream& out, const IntMatrix& m) { write_any(out, m); }

void write_matrix(std::ostream& out, const RealMatrix& m) {
  const auto old = out.precision(17);
  write_any(out, m);
  out.precision(old);
}

IntMatrix random_int_matrix(std::uint32_t n, std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  IntMatrix m(n);
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) m.at(i, j) = dist(rng);
  return m;
}

template <class T>
SquareMatrix<T> reference_product(const SquareMatrix<T>& r, const SquareMatrix<T>& s) {
  check_pair(r, s);
  const std::uint32_t n = r.n();
  SquareMatrix<T> t(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t k = 0; k < n; ++k) {
      T acc{};
      for (std::uint32_t j = 0; j < n; ++j) acc += r.at(i, j) * s.at(j, k);
      t.at(i, k) = acc;
    }
  return t;
}

template IntMatrix reference_product(const IntMatrix&, const IntMatrix&);
template RealMatrix reference_product(const RealMatrix&, const RealMatrix&);

// ---------------------------------------------------------------------------
// One phase

namespace {

class OnePhaseSchema final : public MappingSchema {
 public:
  OnePhaseSchema(std::uint32_t n, std::uint32_t s) : n_(n), s_(s), groups_(0) {
    check_dimension(n);
    check_divides(s, n, "s");
    groups_ = n / s;
  }

  std::string name() const override {
    return "one-phase(n=" + std::to_string(n_) + ",s=" + std::to_string(s_) + ")";
  }
  std::uint64_t reducer_count() const override { return std::uint64_t{groups_} * groups_; }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    for (std::uint64_t i = 0; i < reducer_count(); ++i) fn(ReducerId{i});
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    const auto e = codec::matrix_entry_of(input);
    if (e.tag == MatrixTag::R) {
      const std::uint64_t g = e.row / s_;
      for (std::uint64_t h = 0; h < groups_; ++h) out.push_back(ReducerId{g * groups_ + h});
    } else {
      const std::uint64_t h = e.col / s_;
      for (std::uint64_t g = 0; g < groups_; ++g) out.push_back(ReducerId{g * groups_ + h});
    }
  }
  std::uint64_t capacity() const override { return 2 * std::uint64_t{s_} * n_; }

 private:
  std::uint32_t n_;
  std::uint32_t s_;
  std::uint32_t groups_;
};

}  // namespace

std::unique_ptr<MappingSchema> one_phase_schema(std::uint32_t n, std::uint32_t s) {
  return std::make_unique<OnePhaseSchema>(n, s);
}

template <class T>
OnePhaseResult<T> one_phase_execute(const SquareMatrix<T>& r, const SquareMatrix<T>& s,
                                    std::uint32_t group, unsigned threads) {
  check_pair(r, s);
  const std::uint32_t n = r.n();
  check_divides(group, n, "s");
  const std::uint32_t groups = n / group;

  OnePhaseResult<T> result;
  result.product = SquareMatrix<T>(n);
  result.reducers = std::uint64_t{groups} * groups;
  // Reducer (G,H) receives s full rows of R and s full columns of S.
  result.max_load = 2 * std::uint64_t{group} * n;
  result.pairs = result.reducers * result.max_load;

  parallel_for(result.reducers, threads, [&](std::size_t id) {
    const std::uint32_t g = static_cast<std::uint32_t>(id / groups);
    const std::uint32_t h = static_cast<std::uint32_t>(id % groups);
    const kernels::ConstTile<T> rows{r.data() + std::size_t{g} * group * n, group, n, n};
    const kernels::ConstTile<T> cols{s.data() + std::size_t{h} * group, n, group, n};
    // disjoint s x s block of the product
    kernels::Tile<T> block{result.product.data() + std::size_t{g} * group * n + std::size_t{h} * group,
                           group, group, n};
    kernels::gemm_accumulate(rows, cols, block);
  });
  return result;
}

template OnePhaseResult<std::int64_t> one_phase_execute(const IntMatrix&, const IntMatrix&, std::uint32_t, unsigned);
template OnePhaseResult<double> one_phase_execute(const RealMatrix&, const RealMatrix&, std::uint32_t, unsigned);

// ---------------------------------------------------------------------------
// Two phases

std::uint64_t two_phase_total(std::uint32_t n, TwoPhasePlan plan) {
  check_divides(plan.s, n, "s");
  check_divides(plan.t, n, "t");
  return 2 * cube(n) / plan.s + cube(n) / plan.t;
}

TwoPhasePlan two_phase_plan(std::uint32_t n, std::uint64_t q) {
  check_dimension(n);
  std::optional<TwoPhasePlan> best;
  std::uint64_t best_cost = 0;
  for (std::uint32_t s = 1; s <= n; ++s) {
    if (n % s != 0) continue;
    for (std::uint32_t t = 1; t <= n; ++t) {
      if (n % t != 0) continue;
      const TwoPhasePlan plan{s, t};
      if (plan.q() > q) continue;
      const std::uint64_t cost = two_phase_total(n, plan);
      if (!best || cost < best_cost || (cost == best_cost && s > best->s)) {
        best = plan;
        best_cost = cost;
      }
    }
  }
  if (!best) throw InfeasibleError("no (s, t) with s | n, t | n and 2st <= q=" + std::to_string(q));
  return *best;
}

template <class T>
TwoPhaseResult<T> two_phase_execute(const SquareMatrix<T>& r, const SquareMatrix<T>& s,
                                    TwoPhasePlan plan, unsigned threads) {
  check_pair(r, s);
  const std::uint32_t n = r.n();
  check_divides(plan.s, n, "s");
  check_divides(plan.t, n, "t");
  const std::uint32_t row_groups = n / plan.s;  // also the column-group count
  const std::uint32_t depth_groups = n / plan.t;
  const std::size_t reducers = std::size_t{row_groups} * row_groups * depth_groups;
  if (2 * cube(n) / plan.s > kDefaultCeiling) throw SizingError("phase-1 pairs", 2 * cube(n) / plan.s, kDefaultCeiling);

  struct Shipped {
    MatrixTag tag;
    std::uint32_t row;
    std::uint32_t col;
    T value;
  };
  auto reducer_of = [&](std::uint32_t gi, std::uint32_t gk, std::uint32_t gj) {
    return (std::size_t{gi} * row_groups + gk) * depth_groups + gj;
  };

  TwoPhaseResult<T> result;
  CommBreakdown& comm = result.comm;
  comm.phase1_reducers = reducers;

  // Phase 1 map: r_ij goes to every cube (i/s, *, j/t); s_jk to (*, k/s, j/t).
  std::vector<std::vector<Shipped>> inbox(reducers);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      for (std::uint32_t gk = 0; gk < row_groups; ++gk) {
        inbox[reducer_of(i / plan.s, gk, j / plan.t)].push_back({MatrixTag::R, i, j, r.at(i, j)});
        ++comm.phase1;
      }
      for (std::uint32_t gi = 0; gi < row_groups; ++gi) {
        // s entry (j, i) viewed as s_jk with k = i
        inbox[reducer_of(gi, i / plan.s, j / plan.t)].push_back({MatrixTag::S, j, i, s.at(j, i)});
        ++comm.phase1;
      }
    }
  }
  for (const auto& box : inbox) comm.phase1_max_load = std::max<std::uint64_t>(comm.phase1_max_load, box.size());

  // Phase 1 reduce: each cube produces s^2 partial sums.
  const std::size_t block = std::size_t{plan.s} * plan.s;
  std::vector<T> partials(reducers * block, T{});
  parallel_for(reducers, threads, [&](std::size_t id) {
    const std::uint32_t gj = static_cast<std::uint32_t>(id % depth_groups);
    const std::uint32_t gk = static_cast<std::uint32_t>((id / depth_groups) % row_groups);
    const std::uint32_t gi = static_cast<std::uint32_t>(id / (std::size_t{depth_groups} * row_groups));
    std::vector<T> rt(std::size_t{plan.s} * plan.t), st(std::size_t{plan.t} * plan.s);
    for (const Shipped& e : inbox[id]) {
      if (e.tag == MatrixTag::R) {
        rt[std::size_t{e.row - gi * plan.s} * plan.t + (e.col - gj * plan.t)] = e.value;
      } else {
        st[std::size_t{e.row - gj * plan.t} * plan.s + (e.col - gk * plan.s)] = e.value;
      }
    }
    kernels::gemm_accumulate(kernels::ConstTile<T>{rt.data(), plan.s, plan.t, plan.t},
                             kernels::ConstTile<T>{st.data(), plan.t, plan.s, plan.s},
                             kernels::Tile<T>{partials.data() + id * block, plan.s, plan.s, plan.s});
  });

  // Phase 2 map runs where the partial sums are: the hand-off is free. The
  // shuffle to the (i,k) reducers ships every partial sum once.
  std::vector<std::vector<T>> cell_inbox(std::size_t{n} * n);
  for (std::size_t id = 0; id < reducers; ++id) {
    const std::uint32_t gk = static_cast<std::uint32_t>((id / depth_groups) % row_groups);
    const std::uint32_t gi = static_cast<std::uint32_t>(id / (std::size_t{depth_groups} * row_groups));
    for (std::uint32_t a = 0; a < plan.s; ++a) {
      for (std::uint32_t c = 0; c < plan.s; ++c) {
        const std::uint32_t i = gi * plan.s + a, k = gk * plan.s + c;
        cell_inbox[std::size_t{i} * n + k].push_back(partials[id * block + std::size_t{a} * plan.s + c]);
        ++comm.phase2;
      }
    }
  }

  result.product = SquareMatrix<T>(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t k = 0; k < n; ++k) {
      const auto& sums = cell_inbox[std::size_t{i} * n + k];
      comm.phase2_max_load = std::max<std::uint64_t>(comm.phase2_max_load, sums.size());
      T acc{};
      for (const T& v : sums) acc += v;
      result.product.at(i, k) = acc;
    }
  }

  comm.total = comm.phase1 + comm.handoff + comm.phase2;
  comm.predicted_phase1 = 2 * cube(n) / plan.s;
  comm.predicted_phase2 = cube(n) / plan.t;
  return result;
}

template TwoPhaseResult<std::int64_t> two_phase_execute(const IntMatrix&, const IntMatrix&, TwoPhasePlan, unsigned);
template TwoPhaseResult<double> two_phase_execute(const RealMatrix&, const RealMatrix&, TwoPhasePlan, unsigned);

CrossoverRecord crossover_check(std::uint32_t n, std::uint64_t q) {
  check_dimension(n);
  if (q < 1) throw DomainError("reducer size q must be positive");
  CrossoverRecord rec;
  rec.n = n;
  rec.q = q;
  const double nd = n;
  rec.one_phase_ideal = 4.0 * nd * nd * nd * nd / static_cast<double>(q);
  rec.two_phase_ideal = 4.0 * nd * nd * nd / std::sqrt(static_cast<double>(q));
  // 4n^4/q < 4n^3/sqrt(q)  <=>  q > n^2
  const std::uint64_t nn = std::uint64_t{n} * n;
  rec.ideal_winner = q > nn ? Method::OnePhase : (q < nn ? Method::TwoPhase : Method::Tie);

  for (std::uint32_t s = n; s >= 1; --s) {
    if (n % s == 0 && 2 * std::uint64_t{s} * n <= q) {
      rec.one_phase_group = s;
      rec.one_phase_achieved = std::uint64_t{n / s} * 2 * nn;
      break;
    }
  }
  try {
    rec.two_phase_plan = two_phase_plan(n, q);
    rec.two_phase_achieved = two_phase_total(n, *rec.two_phase_plan);
  } catch (const InfeasibleError&) {
  }
  if (rec.one_phase_achieved && rec.two_phase_achieved) {
    const auto a = *rec.one_phase_achieved, b = *rec.two_phase_achieved;
    rec.achieved_winner = a < b ? Method::OnePhase : (b < a ? Method::TwoPhase : Method::Tie);
  }
  return rec;
}

}  // namespace mrt::matmul
