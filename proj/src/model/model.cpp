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

#include "mrt/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <thread>
#include <unordered_map>

#include "mrt/error.hpp"

namespace mrt {

std::uint64_t ceiling_from_env() {
  const char* raw = std::getenv("MRT_CEILING");
  if (raw == nullptr || *raw == '\0') return kDefaultCeiling;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return kDefaultCeiling;
  return v;
}

bool ProblemSpace::contains(InputId id) const {
  try {
    input_index(id);
    return true;
  } catch (const InvalidParameter&) {
    return false;
  }
}

void ProblemSpace::for_each_input(const std::function<void(InputId)>& fn) const {
  const std::uint64_t n = input_count();
  for (std::uint64_t i = 0; i < n; ++i) fn(input_at(i));
}

bool MappingSchema::emits(ReducerId, const OutputId&) const { return true; }

void SchemaReport::attach_bound(const Quantity& bound) {
  lower_bound = bound;
  ratio = divide(Quantity(replication), bound);
}

Rational replication_rate(std::span<const std::uint64_t> loads, std::uint64_t input_count) {
  if (input_count == 0) throw DomainError("replication rate needs a positive input count");
  BigInt total = 0;
  for (auto q : loads) total += q;
  return Rational(total, BigInt(input_count));
}

namespace {

void check_ceiling(const char* what, std::uint64_t value, std::uint64_t ceiling) {
  if (value > ceiling) throw SizingError(what, value, ceiling);
}

// Inverted view of a schema over the full input universe: for every input
// (by dense index) the sorted list of reducer positions it is sent to.
struct AssignmentTable {
  std::vector<ReducerId> reducers;
  std::unordered_map<std::uint64_t, std::uint32_t> position;
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<std::uint64_t> loads;

  std::span<const std::uint32_t> of(std::uint64_t input_index) const {
    return {targets.data() + offsets[input_index],
            targets.data() + offsets[input_index + 1]};
  }
};

AssignmentTable build_table(const ProblemSpace& problem, const MappingSchema& schema,
                            std::uint64_t ceiling) {
  check_ceiling("input count", problem.input_count(), ceiling);
  check_ceiling("output count", problem.output_count(), ceiling);
  check_ceiling("reducer count", schema.reducer_count(), ceiling);

  AssignmentTable t;
  t.reducers.reserve(schema.reducer_count());
  schema.for_each_reducer([&](ReducerId r) {
    auto [it, fresh] = t.position.emplace(r.value, static_cast<std::uint32_t>(t.reducers.size()));
    if (!fresh) {
      throw SchemaIntegrityError(schema.name() + ": reducer id " + std::to_string(r.value) +
                                 " enumerated twice");
    }
    t.reducers.push_back(r);
  });
  t.loads.assign(t.reducers.size(), 0);

  const std::uint64_t n = problem.input_count();
  t.offsets.reserve(n + 1);
  t.offsets.push_back(0);
  std::vector<ReducerId> buf;
  std::vector<std::uint32_t> pos;
  for (std::uint64_t i = 0; i < n; ++i) {
    buf.clear();
    const InputId input = problem.input_at(i);
    schema.assign(input, buf);
    pos.clear();
    for (ReducerId r : buf) {
      auto it = t.position.find(r.value);
      if (it == t.position.end()) {
        throw SchemaIntegrityError(schema.name() + ": input " + std::to_string(input.value) +
                                   " assigned to unenumerated reducer " +
                                   std::to_string(r.value));
      }
      pos.push_back(it->second);
    }
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    check_ceiling("pair events", t.targets.size() + pos.size(), ceiling);
    for (auto p : pos) {
      t.targets.push_back(p);
      ++t.loads[p];
    }
    t.offsets.push_back(t.targets.size());
  }
  return t;
}

// Reducer positions receiving every dependency of `output`.
void covering_reducers(const ProblemSpace& problem, const AssignmentTable& table,
                       const OutputId& output, std::vector<InputId>& deps,
                       std::vector<std::uint32_t>& acc, std::vector<std::uint32_t>& scratch) {
  deps.clear();
  problem.dependency(output, deps);
  acc.clear();
  if (deps.empty()) return;
  auto first = table.of(problem.input_index(deps[0]));
  acc.assign(first.begin(), first.end());
  for (std::size_t d = 1; d < deps.size() && !acc.empty(); ++d) {
    auto next = table.of(problem.input_index(deps[d]));
    scratch.clear();
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                          std::back_inserter(scratch));
    acc.swap(scratch);
  }
}

}  // namespace

SchemaReport verify_schema(const ProblemSpace& problem, const MappingSchema& schema,
                           const VerifyOptions& options) {
  const AssignmentTable table = build_table(problem, schema, options.ceiling);

  SchemaReport report;
  report.covered = true;
  std::vector<InputId> deps;
  std::vector<std::uint32_t> acc, scratch;
  problem.for_each_output([&](const OutputId& o) {
    if (!report.covered) return;
    covering_reducers(problem, table, o, deps, acc, scratch);
    if (acc.empty()) {
      report.covered = false;
      report.uncovered_witness = o;
    }
  });

  report.reducers = table.reducers.size();
  report.loads = table.loads;
  report.q_max = table.loads.empty() ? 0 : *std::max_element(table.loads.begin(), table.loads.end());
  report.declared_capacity = schema.capacity();
  report.input_count = problem.input_count();
  report.total_load = table.targets.size();
  report.replication = replication_rate(report.loads, report.input_count);
  return report;
}

CoverageProfile coverage_profile(const ProblemSpace& problem, const MappingSchema& schema,
                                 const VerifyOptions& options) {
  const AssignmentTable table = build_table(problem, schema, options.ceiling);

  CoverageProfile profile;
  profile.reducers = table.reducers;
  profile.covered_per_reducer.assign(table.reducers.size(), 0);
  profile.emitted_per_reducer.assign(table.reducers.size(), 0);
  profile.min_cover_multiplicity = UINT64_MAX;
  std::vector<InputId> deps;
  std::vector<std::uint32_t> acc, scratch;
  problem.for_each_output([&](const OutputId& o) {
    covering_reducers(problem, table, o, deps, acc, scratch);
    ++profile.outputs;
    profile.min_cover_multiplicity = std::min<std::uint64_t>(profile.min_cover_multiplicity, acc.size());
    profile.max_cover_multiplicity = std::max<std::uint64_t>(profile.max_cover_multiplicity, acc.size());
    std::uint64_t emitters = 0;
    for (auto p : acc) {
      ++profile.covered_per_reducer[p];
      if (schema.emits(table.reducers[p], o)) {
        ++profile.emitted_per_reducer[p];
        ++emitters;
      }
    }
    if (emitters != 1) ++profile.outputs_not_emitted_once;
  });
  if (profile.outputs == 0) profile.min_cover_multiplicity = 0;
  return profile;
}

Instance::Instance(const ProblemSpace& problem, std::vector<InputId> present)
    : problem_(&problem), present_(std::move(present)) {
  std::sort(present_.begin(), present_.end());
  present_.erase(std::unique(present_.begin(), present_.end()), present_.end());
  for (InputId id : present_) {
    if (!problem.contains(id)) {
      throw InvalidParameter("instance input " + std::to_string(id.value) + " is not in the " +
                             problem.name() + " universe");
    }
  }
}

Instance Instance::full(const ProblemSpace& problem) {
  std::vector<InputId> all;
  all.reserve(problem.input_count());
  problem.for_each_input([&](InputId id) { all.push_back(id); });
  return Instance(problem, std::move(all));
}

Instance Instance::empty(const ProblemSpace& problem) { return Instance(problem, {}); }

ExecutionResult execute(const Instance& instance, const MappingSchema& schema,
                        const ExecuteOptions& options) {
  const ProblemSpace& problem = instance.problem();
  ExecutionResult result;

  // Map phase. Inputs arrive in sorted order, so every bucket stays sorted.
  std::map<ReducerId, std::vector<InputId>> buckets;
  std::vector<ReducerId> buf;
  for (InputId input : instance.present()) {
    buf.clear();
    schema.assign(input, buf);
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    result.stats.pairs += buf.size();
    check_ceiling("pair events", result.stats.pairs, options.ceiling);
    for (ReducerId r : buf) buckets[r].push_back(input);
  }

  std::vector<const std::pair<const ReducerId, std::vector<InputId>>*> work;
  work.reserve(buckets.size());
  for (const auto& entry : buckets) {
    work.push_back(&entry);
    result.stats.max_load = std::max<std::uint64_t>(result.stats.max_load, entry.second.size());
  }
  result.stats.reducers_used = work.size();

  // Reduce phase. Each worker owns a strided slice of the reducers.
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, work.size() ? work.size() : 1));
  std::vector<std::vector<OutputId>> partial(threads);
  auto run = [&](unsigned w) {
    std::vector<OutputId> local;
    for (std::size_t i = w; i < work.size(); i += threads) {
      const auto& [reducer, inputs] = *work[i];
      local.clear();
      problem.outputs_among(inputs, local);
      for (const OutputId& o : local) {
        if (schema.emits(reducer, o)) partial[w].push_back(o);
      }
    }
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
  }

  for (auto& part : partial) {
    result.outputs.insert(result.outputs.end(), part.begin(), part.end());
  }
  std::sort(result.outputs.begin(), result.outputs.end());
  result.outputs.erase(std::unique(result.outputs.begin(), result.outputs.end()),
                       result.outputs.end());
  return result;
}

std::vector<OutputId> oracle_outputs(const Instance& instance, std::uint64_t ceiling) {
  const ProblemSpace& problem = instance.problem();
  check_ceiling("input count", problem.input_count(), ceiling);
  check_ceiling("output count", problem.output_count(), ceiling);

  std::vector<bool> present(problem.input_count(), false);
  for (InputId id : instance.present()) present[problem.input_index(id)] = true;

  std::vector<OutputId> out;
  std::vector<InputId> deps;
  problem.for_each_output([&](const OutputId& o) {
    deps.clear();
    problem.dependency(o, deps);
    for (InputId d : deps) {
      if (!present[problem.input_index(d)]) return;
    }
    out.push_back(o);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mrt
