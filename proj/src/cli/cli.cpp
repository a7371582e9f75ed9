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

#include "mrt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrt/bounds.hpp"
#include "mrt/error.hpp"
#include "mrt/graphs.hpp"
#include "mrt/hamming.hpp"
#include "mrt/matmul.hpp"
#include "mrt/model.hpp"

namespace mrt::cli {

namespace {

using Clock = std::chrono::steady_clock;
using Params = std::vector<std::pair<std::string, std::uint64_t>>;

struct Config {
  std::string command;
  std::string problem;
  std::map<std::string, std::vector<std::uint64_t>> lists;
  std::string instance = "full";
  std::optional<std::uint64_t> m;
  std::optional<unsigned> attrs;
  std::string rho;
  std::string hypergraph;
  std::string lhs, rhs;
  bool center = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_path, json_path, dump_path;
  bool timing = false;
  double cost_a = 1.0, cost_b = 0.0, cost_c = 0.0;
};

const char* const kListKeys[] = {"b", "c", "k", "d", "n", "groups", "s", "t", "q", "dims"};

struct Row {
  std::string problem;
  std::string params;
  std::optional<std::uint64_t> q_max;
  std::optional<Quantity> r;
  std::optional<Quantity> lower_bound;
  std::optional<bool> covered;
  std::optional<std::uint64_t> comm_pairs;
  double runtime_ms = 0;

  std::optional<Quantity> ratio() const {
    if (!r || !lower_bound) return std::nullopt;
    if (lower_bound->is_exact() ? *lower_bound->exact == 0 : lower_bound->value == 0) return std::nullopt;
    return divide(*r, *lower_bound);
  }
};

std::string param_string(const Params& p) {
  std::string s;
  for (const auto& [key, value] : p) {
    if (!s.empty()) s += ';';
    s += key + "=" + std::to_string(value);
  }
  return s;
}

std::uint64_t get(const Params& p, const std::string& key) {
  for (const auto& [k, v] : p)
    if (k == key) return v;
  throw InvalidParameter("missing parameter " + key);
}

unsigned small(std::uint64_t v, const char* what) {
  if (v > 1'000'000) throw InvalidParameter(std::string(what) + " is out of range");
  return static_cast<unsigned>(v);
}

const std::vector<std::uint64_t>& list(const Config& cfg, const std::string& key) {
  auto it = cfg.lists.find(key);
  if (it == cfg.lists.end() || it->second.empty()) {
    throw InvalidParameter("--" + key + " is required for problem " + cfg.problem);
  }
  return it->second;
}

// Cartesian product of the listed keys, first key varying slowest.
std::vector<Params> grid(const Config& cfg, const std::vector<std::string>& keys) {
  std::vector<Params> out{{}};
  for (const auto& key : keys) {
    std::vector<Params> next;
    for (const auto& partial : out) {
      for (std::uint64_t v : list(cfg, key)) {
        Params p = partial;
        p.emplace_back(key, v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> schema_keys(const std::string& problem) {
  if (problem == "hd1") return {"b", "c"};
  if (problem == "hd1-weight") return {"b", "dims", "k"};
  if (problem == "ball2") return {"b"};
  if (problem == "segdel") return {"b", "k", "d"};
  if (problem == "triangle") return {"n", "groups"};
  if (problem == "twopath") return {"n", "k"};
  if (problem == "matmul") return {"n", "s"};
  if (problem == "matmul2") return {"n", "q"};
  throw InvalidParameter("unknown problem '" + problem +
                         "' (expected hd1, hd1-weight, ball2, segdel, triangle, twopath, matmul, matmul2)");
}

// A problem space, a schema on it, and the closed-form bound that applies.
struct Setup {
  std::unique_ptr<ProblemSpace> space;
  std::unique_ptr<MappingSchema> schema;
  std::optional<bounds::ProblemParams> bound;
};

Setup make_setup(const Config& cfg, const Params& p) {
  const std::string& prob = cfg.problem;
  Setup s;
  if (prob == "hd1") {
    const unsigned b = small(get(p, "b"), "b");
    s.space = std::make_unique<hamming::HammingSpace>(b);
    s.schema = hamming::splitting_schema(b, small(get(p, "c"), "c"));
    s.bound = bounds::Hd1{b};
  } else if (prob == "hd1-weight") {
    const unsigned b = small(get(p, "b"), "b");
    s.space = std::make_unique<hamming::HammingSpace>(b);
    s.schema = hamming::weight_schema_d(b, small(get(p, "dims"), "dims"), small(get(p, "k"), "k"));
    s.bound = bounds::Hd1{b};
  } else if (prob == "ball2") {
    const unsigned b = small(get(p, "b"), "b");
    s.space = std::make_unique<hamming::HammingSpace>(
        b, 2, cfg.center ? hamming::DistanceMode::AtMost : hamming::DistanceMode::Exactly);
    s.schema = hamming::ball2_schema(b, cfg.center);
  } else if (prob == "segdel") {
    const unsigned b = small(get(p, "b"), "b");
    const unsigned d = small(get(p, "d"), "d");
    s.space = std::make_unique<hamming::HammingSpace>(b, d, hamming::DistanceMode::AtMost);
    s.schema = hamming::segment_deletion_schema(b, small(get(p, "k"), "k"), d);
  } else if (prob == "triangle") {
    const unsigned n = small(get(p, "n"), "n");
    s.space = std::make_unique<graphs::GraphSpace>(n, graphs::Pattern::Triangle);
    s.schema = graphs::triangle_partition_schema(n, small(get(p, "groups"), "groups"));
    s.bound = bounds::Triangle{n};
  } else if (prob == "twopath") {
    const unsigned n = small(get(p, "n"), "n");
    s.space = std::make_unique<graphs::GraphSpace>(n, graphs::Pattern::TwoPath);
    s.schema = graphs::two_path_schema(n, small(get(p, "k"), "k"));
    s.bound = bounds::TwoPath{n};
  } else if (prob == "matmul") {
    const unsigned n = small(get(p, "n"), "n");
    s.space = std::make_unique<matmul::MatMulSpace>(n);
    s.schema = matmul::one_phase_schema(n, small(get(p, "s"), "s"));
    s.bound = bounds::MatMul{n};
  } else {
    throw InvalidParameter("problem '" + prob + "' has no single-round schema");
  }
  return s;
}

std::optional<Quantity> bound_at(const std::optional<bounds::ProblemParams>& params, std::uint64_t q) {
  if (!params) return std::nullopt;
  try {
    return bounds::table1_bound(*params, q);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Row verify_row(const Config& cfg, const std::string& problem, const Params& p) {
  const auto start = Clock::now();
  Setup s = make_setup(cfg, p);
  const SchemaReport report = verify_schema(*s.space, *s.schema, VerifyOptions{ceiling_from_env()});
  Row row;
  row.problem = problem;
  row.params = param_string(p);
  row.q_max = report.q_max;
  row.r = Quantity(report.replication);
  row.lower_bound = bound_at(s.bound, report.q_max);
  row.covered = report.covered;
  row.comm_pairs = report.total_load;
  if (cfg.timing) row.runtime_ms = elapsed_ms(start);
  return row;
}

// ---------------------------------------------------------------------------
// Instances

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open '" + path + "'");
  return in;
}

std::vector<InputId> hamming_instance(const Config& cfg, const ProblemSpace& space, unsigned b) {
  std::vector<InputId> ids;
  if (cfg.instance == "random") {
    std::mt19937_64 rng(cfg.seed);
    std::bernoulli_distribution coin(0.5);
    for (std::uint64_t w = 0; w < space.input_count(); ++w)
      if (coin(rng)) ids.push_back(InputId{w});
    return ids;
  }
  auto in = open_input(cfg.instance);
  for (std::uint64_t w : read_bit_strings(in, b)) ids.push_back(codec::bits(w, b));
  return ids;
}

std::vector<InputId> graph_instance(const Config& cfg, std::uint32_t n) {
  graphs::Graph g;
  if (cfg.instance == "random") {
    std::mt19937_64 rng(cfg.seed);
    const std::uint64_t m = cfg.m.value_or(std::uint64_t{n} * (n - 1) / 4);
    g = graphs::random_graph(n, m, rng);
  } else {
    auto in = open_input(cfg.instance);
    g = graphs::read_edge_list(in, n);
    if (g.nodes() > n) {
      throw InvalidParameter("instance uses node " + std::to_string(g.nodes() - 1) + " but n=" + std::to_string(n));
    }
  }
  return g.edge_ids();
}

std::pair<matmul::IntMatrix, matmul::IntMatrix> matrices(const Config& cfg, std::uint32_t n) {
  if (!cfg.lhs.empty() || !cfg.rhs.empty()) {
    if (cfg.lhs.empty() || cfg.rhs.empty()) throw InvalidParameter("--lhs and --rhs go together");
    auto a = open_input(cfg.lhs);
    auto b = open_input(cfg.rhs);
    auto r = matmul::read_int_matrix(a);
    auto s = matmul::read_int_matrix(b);
    if (r.n() != n || s.n() != n) throw InvalidParameter("matrix files do not match n=" + std::to_string(n));
    return {std::move(r), std::move(s)};
  }
  std::mt19937_64 rng(cfg.seed);
  auto r = matmul::random_int_matrix(n, rng);
  auto s = matmul::random_int_matrix(n, rng);
  return {std::move(r), std::move(s)};
}

Row execute_two_phase(const Config& cfg, const Params& p) {
  const auto start = Clock::now();
  const unsigned n = small(get(p, "n"), "n");
  const auto plan = matmul::two_phase_plan(n, get(p, "q"));
  const auto [r, s] = matrices(cfg, n);
  const auto result = matmul::two_phase_execute(r, s, plan, cfg.threads);
  const bool ok = result.product == matmul::reference_product(r, s) &&
                  result.comm.phase1 == result.comm.predicted_phase1 &&
                  result.comm.phase2 == result.comm.predicted_phase2;
  Row row;
  row.problem = "matmul2";
  Params shown = p;
  shown.emplace_back("s", plan.s);
  shown.emplace_back("t", plan.t);
  row.params = param_string(shown);
  row.q_max = result.comm.phase1_max_load;
  row.r = Quantity(Rational(result.comm.total, 2 * std::uint64_t{n} * n));
  row.covered = ok;
  row.comm_pairs = result.comm.total;
  if (cfg.timing) row.runtime_ms = elapsed_ms(start);
  return row;
}

Row execute_row(const Config& cfg, const Params& p, std::ostream* dump) {
  if (cfg.problem == "matmul2") return execute_two_phase(cfg, p);
  const auto start = Clock::now();
  Setup s = make_setup(cfg, p);

  std::vector<InputId> present;
  if (cfg.instance == "full") {
    present.reserve(s.space->input_count());
    s.space->for_each_input([&](InputId id) { present.push_back(id); });
  } else if (cfg.instance == "empty") {
    // nothing present
  } else if (cfg.problem == "triangle" || cfg.problem == "twopath") {
    present = graph_instance(cfg, static_cast<std::uint32_t>(get(p, "n")));
  } else if (cfg.problem == "matmul") {
    throw InvalidParameter("matmul instances are 'full' or 'empty'; use --lhs/--rhs for values");
  } else {
    present = hamming_instance(cfg, *s.space, small(get(p, "b"), "b"));
  }
  const Instance instance(*s.space, std::move(present));
  const std::uint64_t ceiling = ceiling_from_env();
  const ExecutionResult result = execute(instance, *s.schema, ExecuteOptions{ceiling, cfg.threads});
  bool ok = result.outputs == oracle_outputs(instance, ceiling);

  if (cfg.problem == "matmul") {
    const unsigned n = small(get(p, "n"), "n");
    const auto [r, sm] = matrices(cfg, n);
    const auto numeric = matmul::one_phase_execute(r, sm, small(get(p, "s"), "s"), cfg.threads);
    ok = ok && numeric.product == matmul::reference_product(r, sm);
  }
  if (dump) {
    *dump << "# " << cfg.problem << " " << param_string(p) << '\n';
    for (const auto& o : result.outputs) *dump << to_string(o) << '\n';
  }

  Row row;
  row.problem = cfg.problem;
  row.params = param_string(p);
  row.q_max = result.stats.max_load;
  if (!instance.present().empty()) {
    row.r = Quantity(Rational(result.stats.pairs, instance.present().size()));
  }
  row.covered = ok;
  row.comm_pairs = result.stats.pairs;
  if (cfg.timing) row.runtime_ms = elapsed_ms(start);
  return row;
}

// ---------------------------------------------------------------------------
// Closed-form bounds

Rational parse_rational(const std::string& text) {
  try {
    return Rational(text);
  } catch (const std::exception&) {
    throw InvalidParameter("cannot parse '" + text + "' as a rational");
  }
}

bounds::Hypergraph parse_hypergraph(const std::string& text) {
  if (text == "triangle") return bounds::Hypergraph::triangle();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    unsigned size = 0;
    try {
      size = static_cast<unsigned>(std::stoul(text.substr(colon + 1)));
    } catch (const std::exception&) {
      throw InvalidParameter("bad hypergraph size in '" + text + "'");
    }
    if (kind == "chain") return bounds::Hypergraph::chain(size);
    if (kind == "star") return bounds::Hypergraph::star(size);
  }
  throw InvalidParameter("unknown hypergraph '" + text + "' (triangle, chain:N, star:N)");
}

// Parameters of one closed-form problem, plus their canonical rendering.
struct BoundProblem {
  bounds::ProblemParams params;
  std::string text;
};

std::vector<BoundProblem> bound_problems(const Config& cfg) {
  const auto tag = bounds::parse_problem_tag(cfg.problem);
  std::vector<BoundProblem> out;
  switch (tag) {
    case bounds::ProblemTag::Hd1:
      for (auto b : list(cfg, "b")) out.push_back({bounds::Hd1{small(b, "b")}, "b=" + std::to_string(b)});
      break;
    case bounds::ProblemTag::Triangle:
      for (auto n : list(cfg, "n")) out.push_back({bounds::Triangle{n}, "n=" + std::to_string(n)});
      break;
    case bounds::ProblemTag::TwoPath:
      for (auto n : list(cfg, "n")) out.push_back({bounds::TwoPath{n}, "n=" + std::to_string(n)});
      break;
    case bounds::ProblemTag::MatMul:
      for (auto n : list(cfg, "n")) out.push_back({bounds::MatMul{n}, "n=" + std::to_string(n)});
      break;
    case bounds::ProblemTag::Alon:
      for (auto s : list(cfg, "s")) {
        if (cfg.m) {
          out.push_back({bounds::Alon{small(s, "s"), 0, *cfg.m},
                         "s=" + std::to_string(s) + ";m=" + std::to_string(*cfg.m)});
        } else {
          for (auto n : list(cfg, "n")) {
            out.push_back({bounds::Alon{small(s, "s"), n, std::nullopt},
                           "s=" + std::to_string(s) + ";n=" + std::to_string(n)});
          }
        }
      }
      break;
    case bounds::ProblemTag::Join: {
      Rational rho;
      std::optional<unsigned> attrs = cfg.attrs;
      if (!cfg.hypergraph.empty()) {
        const auto h = parse_hypergraph(cfg.hypergraph);
        rho = bounds::fractional_edge_cover(h).rho;
        if (!attrs) attrs = h.node_count();
      } else if (!cfg.rho.empty()) {
        rho = parse_rational(cfg.rho);
      } else {
        throw InvalidParameter("join needs --rho or --hypergraph");
      }
      if (!attrs) throw InvalidParameter("join needs --attrs (number of attributes)");
      for (auto n : list(cfg, "n")) {
        out.push_back({bounds::Join{n, *attrs, rho}, "n=" + std::to_string(n) + ";m=" + std::to_string(*attrs) +
                                                         ";rho=" + to_string(rho)});
      }
      break;
    }
  }
  return out;
}

std::vector<Row> cmd_bounds(const Config& cfg) {
  std::vector<Row> rows;
  for (const auto& bp : bound_problems(cfg)) {
    for (auto q : list(cfg, "q")) {
      const auto start = Clock::now();
      Row row;
      row.problem = cfg.problem;
      row.params = bp.text + ";q=" + std::to_string(q);
      row.q_max = q;
      row.lower_bound = bounds::table1_bound(bp.params, q);
      if (cfg.timing) row.runtime_ms = elapsed_ms(start);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Tradeoff curves

std::string log2_text(std::uint64_t q) {
  if (auto lg = exact_log2(q)) return std::to_string(*lg);
  return to_decimal(std::log2(static_cast<double>(q)), 6);
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::vector<std::uint64_t> powers_of_two(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 1; q <= hi && q != 0; q <<= 1)
    if (q >= lo) out.push_back(q);
  return out;
}

Row bound_point(const Config& cfg, const std::string& base, const bounds::ProblemParams& params, std::uint64_t q) {
  Row row;
  row.problem = cfg.problem;
  row.params = base + ";log2q=" + log2_text(q);
  row.q_max = q;
  row.lower_bound = bounds::table1_bound(params, q);
  return row;
}

Row schema_point(Config cfg, const std::string& problem, const Params& p) {
  cfg.problem = problem;
  Row row = verify_row(cfg, problem, p);
  row.params += ";log2q=" + log2_text(*row.q_max);
  return row;
}

std::vector<Row> cmd_tradeoff(const Config& cfg, std::ostream& err) {
  std::vector<Row> rows;
  const std::string& prob = cfg.problem;
  if (prob == "hd1") {
    for (auto b : list(cfg, "b")) {
      const std::string base = "b=" + std::to_string(b);
      const bounds::ProblemParams params = bounds::Hd1{small(b, "b")};
      for (auto q : powers_of_two(2, std::uint64_t{1} << std::min<std::uint64_t>(b, 62))) {
        rows.push_back(bound_point(cfg, base, params, q));
      }
      for (auto c : divisors(b)) rows.push_back(schema_point(cfg, "hd1", {{"b", b}, {"c", c}}));
      if (b % 2 == 0 && b <= 16) {
        for (auto k : divisors(b / 2)) {
          rows.push_back(schema_point(cfg, "hd1-weight", {{"b", b}, {"dims", 2}, {"k", k}}));
        }
      }
    }
  } else if (prob == "matmul") {
    for (auto n : list(cfg, "n")) {
      const std::string base = "n=" + std::to_string(n);
      const bounds::ProblemParams params = bounds::MatMul{n};
      for (std::uint64_t j = 1; j <= n; ++j) rows.push_back(bound_point(cfg, base, params, 2 * n * j));
      for (auto s : divisors(n)) rows.push_back(schema_point(cfg, "matmul", {{"n", n}, {"s", s}}));
    }
  } else if (prob == "triangle" || prob == "twopath") {
    for (auto n : list(cfg, "n")) {
      const std::string base = "n=" + std::to_string(n);
      const bounds::ProblemParams params =
          prob == "triangle" ? bounds::ProblemParams(bounds::Triangle{n}) : bounds::ProblemParams(bounds::TwoPath{n});
      for (auto q : powers_of_two(bounds::min_reducer_size(params), n * (n - 1) / 2)) {
        rows.push_back(bound_point(cfg, base, params, q));
      }
      for (auto d : divisors(n)) {
        if (prob == "triangle" && d < 3) continue;
        if (prob == "triangle") {
          rows.push_back(schema_point(cfg, prob, {{"n", n}, {"groups", d}}));
        } else {
          rows.push_back(schema_point(cfg, prob, {{"n", n}, {"k", d}}));
        }
      }
    }
  } else {
    // closed form only: alon, join
    for (const auto& bp : bound_problems(cfg)) {
      for (auto q : list(cfg, "q")) rows.push_back(bound_point(cfg, bp.text, bp.params, q));
      Row warning;
      warning.problem = cfg.problem;
      warning.params = bp.text + ";warning=no schema family";
      rows.push_back(std::move(warning));
      err << "warning: " << cfg.problem << " has no schema family; emitting the bound curve only\n";
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Cost optimization

struct OptimizeRow {
  std::string problem;
  std::string params;
  std::uint64_t q;
  Quantity r;
  double cost;
};

std::vector<std::uint64_t> default_domain(const bounds::ProblemParams& params) {
  const std::uint64_t lo = bounds::min_reducer_size(params);
  struct Top {
    std::uint64_t operator()(const bounds::Hd1& p) const { return std::uint64_t{1} << std::min(p.b, 62u); }
    std::uint64_t operator()(const bounds::Triangle& p) const { return p.n * (p.n - 1) / 2; }
    std::uint64_t operator()(const bounds::TwoPath& p) const { return p.n * (p.n - 1) / 2; }
    std::uint64_t operator()(const bounds::MatMul& p) const { return 2 * p.n * p.n; }
    std::uint64_t operator()(const bounds::Alon&) const { return 0; }
    std::uint64_t operator()(const bounds::Join&) const { return 0; }
  };
  const std::uint64_t hi = std::visit(Top{}, params);
  if (hi == 0) throw InvalidParameter("this problem needs an explicit --q domain");
  return powers_of_two(lo, hi);
}

std::vector<OptimizeRow> cmd_optimize(const Config& cfg) {
  std::vector<OptimizeRow> rows;
  for (const auto& bp : bound_problems(cfg)) {
    std::vector<std::uint64_t> domain;
    auto it = cfg.lists.find("q");
    domain = it != cfg.lists.end() && !it->second.empty() ? it->second : default_domain(bp.params);
    bounds::CostModel model;
    model.a = cfg.cost_a;
    model.b = cfg.cost_b;
    model.c = cfg.cost_c;
    const auto params = bp.params;
    model.curve = [params](double q) { return bounds::table1_bound(params, static_cast<std::uint64_t>(q)).value; };
    const auto best = bounds::optimize_cost(model, domain);
    rows.push_back({cfg.problem,
                    bp.text + ";cost_a=" + to_decimal(cfg.cost_a, 6) + ";cost_b=" + to_decimal(cfg.cost_b, 6) +
                        ";cost_c=" + to_decimal(cfg.cost_c, 6),
                    best.q, bounds::table1_bound(bp.params, best.q), best.cost});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Emission

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string render_runtime(const Config& cfg, double ms) { return cfg.timing ? to_decimal(ms, 3) : "0"; }

void write_csv(const Config& cfg, std::ostream& out, const std::vector<Row>& rows) {
  out << "problem,params,q_max,r,lower_bound,ratio,covered,comm_pairs,runtime_ms\n";
  for (const auto& row : rows) {
    const auto ratio = row.ratio();
    out << csv_field(row.problem) << ',' << csv_field(row.params) << ','
        << (row.q_max ? std::to_string(*row.q_max) : "") << ',' << (row.r ? row.r->decimal() : "") << ','
        << (row.lower_bound ? row.lower_bound->decimal() : "") << ',' << (ratio ? ratio->decimal() : "") << ','
        << (row.covered ? (*row.covered ? "true" : "false") : "") << ','
        << (row.comm_pairs ? std::to_string(*row.comm_pairs) : "") << ','
        << (row.q_max || row.r || row.lower_bound ? render_runtime(cfg, row.runtime_ms) : "") << '\n';
  }
}

nlohmann::json row_json(const Config& cfg, const Row& row) {
  nlohmann::json j;
  j["problem"] = row.problem;
  j["params"] = row.params;
  j["q_max"] = row.q_max ? nlohmann::json(*row.q_max) : nlohmann::json();
  j["r"] = row.r ? nlohmann::json(row.r->repr()) : nlohmann::json();
  j["lower_bound"] = row.lower_bound ? nlohmann::json(row.lower_bound->repr()) : nlohmann::json();
  const auto ratio = row.ratio();
  j["ratio"] = ratio ? nlohmann::json(ratio->repr()) : nlohmann::json();
  j["covered"] = row.covered ? nlohmann::json(*row.covered) : nlohmann::json();
  j["comm_pairs"] = row.comm_pairs ? nlohmann::json(*row.comm_pairs) : nlohmann::json();
  j["runtime_ms"] = cfg.timing ? row.runtime_ms : 0.0;
  return j;
}

void write_optimize_csv(std::ostream& out, const std::vector<OptimizeRow>& rows) {
  out << "problem,params,q_star,r_at_q_star,cost\n";
  for (const auto& row : rows) {
    out << csv_field(row.problem) << ',' << csv_field(row.params) << ',' << row.q << ',' << row.r.decimal() << ','
        << to_decimal(row.cost, 6) << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--problem,-p", cfg.problem, "Problem or schema family")->required();
  for (const char* key : kListKeys) {
    sub->add_option(std::string("--") + key, cfg.lists[key], std::string("Comma-separated values of ") + key)
        ->delimiter(',');
  }
  sub->add_option("--out,-o", cfg.out_path, "Write the CSV here instead of stdout");
  sub->add_option("--json", cfg.json_path, "Also write rows with exact rationals as JSON");
  sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  sub->add_flag("--timing", cfg.timing, "Fill runtime_ms (otherwise 0, for reproducible output)");
}

int dispatch(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream csv;
  nlohmann::json sidecar;
  sidecar["command"] = cfg.command;
  sidecar["problem"] = cfg.problem;
  sidecar["seed"] = cfg.seed;
  int status = kOk;

  if (cfg.command == "optimize") {
    const auto rows = cmd_optimize(cfg);
    write_optimize_csv(csv, rows);
    auto& arr = sidecar["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
      arr.push_back({{"problem", row.problem}, {"params", row.params}, {"q_star", row.q},
                     {"r_at_q_star", row.r.repr()}, {"cost", row.cost}});
    }
  } else {
    std::vector<Row> rows;
    if (cfg.command == "bounds") {
      rows = cmd_bounds(cfg);
    } else if (cfg.command == "tradeoff") {
      rows = cmd_tradeoff(cfg, err);
    } else {
      std::ostringstream dump;
      const bool dumping = cfg.command == "execute" && !cfg.dump_path.empty();
      for (const auto& p : grid(cfg, schema_keys(cfg.problem))) {
        if (cfg.command == "verify") {
          rows.push_back(verify_row(cfg, cfg.problem, p));
        } else {
          rows.push_back(execute_row(cfg, p, dumping ? &dump : nullptr));
        }
      }
      if (dumping) write_file(cfg.dump_path, dump.str());
    }
    for (const auto& row : rows) {
      if (row.covered && !*row.covered) status = kFailed;
    }
    write_csv(cfg, csv, rows);
    auto& arr = sidecar["rows"] = nlohmann::json::array();
    for (const auto& row : rows) arr.push_back(row_json(cfg, row));
  }

  if (!cfg.json_path.empty()) write_file(cfg.json_path, sidecar.dump(2) + "\n");
  if (!cfg.out_path.empty()) {
    write_file(cfg.out_path, csv.str());
  } else {
    out << csv.str();
  }
  if (status == kFailed) {
    err << (cfg.command == "execute" ? "error: output differs from the oracle\n" : "error: coverage failure\n");
  }
  return status;
}

}  // namespace

std::vector<std::uint64_t> read_bit_strings(std::istream& in, unsigned b) {
  if (b < 1 || b > 62) throw InvalidParameter("b must be in [1, 62]");
  std::vector<std::uint64_t> words;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;
    std::string extra;
    if (tokens >> extra) throw ParseError(lineno, "expected one bit string per line");
    if (tok.size() != b) {
      throw ParseError(lineno, "bit string '" + tok + "' has length " + std::to_string(tok.size()) +
                                   ", expected " + std::to_string(b));
    }
    std::uint64_t w = 0;
    for (char ch : tok) {
      if (ch != '0' && ch != '1') throw ParseError(lineno, "invalid character in bit string '" + tok + "'");
      w = (w << 1) | static_cast<std::uint64_t>(ch - '0');
    }
    words.push_back(w);
  }
  return words;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Replication rate versus reducer size for map-reduce mapping schemas", "mrt"};
  app.require_subcommand(1);
  Config cfg;

  auto* verify = app.add_subcommand("verify", "Check coverage and replication rate of schemas over a grid");
  auto* exec = app.add_subcommand("execute", "Run schemas on an instance and diff against the oracle");
  auto* bnd = app.add_subcommand("bounds", "Evaluate closed-form lower bounds");
  auto* trade = app.add_subcommand("tradeoff", "Bound curve and achieved schema points");
  auto* opt = app.add_subcommand("optimize", "Minimize a*r(q) + b*q + c*q^2 over q");
  for (auto* sub : {verify, exec, bnd, trade, opt}) add_common(sub, cfg);

  for (auto* sub : {verify, exec, trade}) {
    sub->add_flag("--center", cfg.center, "ball2: include the center string (covers distance <= 2)");
  }
  exec->add_option("--instance", cfg.instance, "'full', 'empty', 'random' or a file")->capture_default_str();
  exec->add_option("--threads", cfg.threads, "Reducer worker threads")->check(CLI::Range(1u, 256u));
  exec->add_option("--lhs", cfg.lhs, "matmul: matrix file for R");
  exec->add_option("--rhs", cfg.rhs, "matmul: matrix file for S");
  exec->add_option("--dump", cfg.dump_path, "Write the executed outputs here");
  for (auto* sub : {exec, bnd, trade, opt}) {
    sub->add_option("--m", cfg.m, "Edge count (random instances, edge-form bounds)");
  }
  for (auto* sub : {bnd, trade, opt}) {
    sub->add_option("--attrs", cfg.attrs, "join: number of attributes");
    sub->add_option("--rho", cfg.rho, "join: edge-cover number, e.g. 3/2");
    sub->add_option("--hypergraph", cfg.hypergraph, "join: triangle, chain:N or star:N");
  }
  opt->add_option("--cost-a", cfg.cost_a, "Communication coefficient")->capture_default_str();
  opt->add_option("--cost-b", cfg.cost_b, "Linear reducer-work coefficient")->capture_default_str();
  opt->add_option("--cost-c", cfg.cost_c, "Quadratic reducer-work coefficient")->capture_default_str();

  std::vector<const char*> argv{"mrt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  // hd1-weight defaults to the two-dimensional grid
  if (cfg.lists["dims"].empty()) cfg.lists["dims"] = {2};

  try {
    return dispatch(cfg, out, err);
  } catch (const SchemaIntegrityError& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace mrt::cli
