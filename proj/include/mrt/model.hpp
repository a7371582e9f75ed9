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

// Problems, mapping schemas and the single-round accounting around them.
//
// A ProblemSpace is the finite universe of possible inputs and outputs plus
// the output -> input-set dependency. A MappingSchema sends each possible
// input to a set of reducers. verify_schema() checks the covering constraint
// over the whole universe and computes the exact replication rate;
// execute() runs the schema on a concrete Instance.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrt/ids.hpp"
#include "mrt/rational.hpp"

namespace mrt {

// Default limit on enumeration work (pair events, outputs, inputs).
inline constexpr std::uint64_t kDefaultCeiling = 100'000'000;

// kDefaultCeiling, or the value of the MRT_CEILING environment variable when
// it parses as a positive integer.
std::uint64_t ceiling_from_env();

class ProblemSpace {
 public:
  virtual ~ProblemSpace() = default;

  virtual std::string name() const = 0;
  virtual std::uint64_t input_count() const = 0;
  virtual std::uint64_t output_count() const = 0;

  // Dense index of an input in [0, input_count()). Throws InvalidParameter
  // for ids outside the universe.
  virtual std::uint64_t input_index(InputId id) const = 0;
  virtual InputId input_at(std::uint64_t index) const = 0;

  // Yields each output exactly once.
  virtual void for_each_output(const std::function<void(const OutputId&)>& fn) const = 0;

  // Appends the (nonempty) dependency set of `output` to `deps`.
  virtual void dependency(const OutputId& output, std::vector<InputId>& deps) const = 0;

  // Reduce rule: appends every output whose whole dependency set lies in
  // `inputs` (sorted, unique).
  virtual void outputs_among(std::span<const InputId> inputs,
                             std::vector<OutputId>& out) const = 0;

  bool contains(InputId id) const;
  void for_each_input(const std::function<void(InputId)>& fn) const;
};

class MappingSchema {
 public:
  virtual ~MappingSchema() = default;

  virtual std::string name() const = 0;
  virtual std::uint64_t reducer_count() const = 0;
  virtual void for_each_reducer(const std::function<void(ReducerId)>& fn) const = 0;

  // Appends the reducers that receive `input`. Deterministic.
  virtual void assign(InputId input, std::vector<ReducerId>& out) const = 0;

  // Declared reducer size q.
  virtual std::uint64_t capacity() const = 0;

  // Production rule: whether `reducer` is the one allowed to emit `output`
  // when several cover it. The default lets every covering reducer emit and
  // leaves deduplication to the execution engine.
  virtual bool emits(ReducerId reducer, const OutputId& output) const;
};

struct SchemaReport {
  bool covered = false;
  std::optional<OutputId> uncovered_witness;
  std::uint64_t reducers = 0;  // p
  std::vector<std::uint64_t> loads;  // q_i in enumeration order
  std::uint64_t q_max = 0;
  std::uint64_t declared_capacity = 0;
  std::uint64_t input_count = 0;
  std::uint64_t total_load = 0;  // sum of q_i
  Rational replication;  // r = total_load / input_count
  std::optional<Quantity> lower_bound;
  std::optional<Quantity> ratio;  // r / lower_bound

  bool capacity_respected() const { return q_max <= declared_capacity; }
  void attach_bound(const Quantity& bound);
};

struct VerifyOptions {
  std::uint64_t ceiling = kDefaultCeiling;
};

SchemaReport verify_schema(const ProblemSpace& problem, const MappingSchema& schema,
                           const VerifyOptions& options = {});

Rational replication_rate(std::span<const std::uint64_t> loads, std::uint64_t input_count);

// How many outputs each reducer covers and emits, and how many covering and
// emitting reducers each output has. Used to check production rules and
// per-reducer g(q) limits.
struct CoverageProfile {
  std::vector<ReducerId> reducers;  // enumeration order
  std::vector<std::uint64_t> covered_per_reducer;
  std::vector<std::uint64_t> emitted_per_reducer;
  std::uint64_t outputs = 0;
  std::uint64_t min_cover_multiplicity = 0;
  std::uint64_t max_cover_multiplicity = 0;
  std::uint64_t outputs_not_emitted_once = 0;
};

CoverageProfile coverage_profile(const ProblemSpace& problem, const MappingSchema& schema,
                                 const VerifyOptions& options = {});

// Subset of a problem's inputs actually present.
class Instance {
 public:
  Instance(const ProblemSpace& problem, std::vector<InputId> present);

  static Instance full(const ProblemSpace& problem);
  static Instance empty(const ProblemSpace& problem);

  const ProblemSpace& problem() const { return *problem_; }
  std::span<const InputId> present() const { return present_; }

 private:
  const ProblemSpace* problem_;
  std::vector<InputId> present_;  // sorted, unique
};

struct CommStats {
  std::uint64_t pairs = 0;  // key-value pairs shipped by the mappers
  std::uint64_t reducers_used = 0;
  std::uint64_t max_load = 0;
};

struct ExecutionResult {
  std::vector<OutputId> outputs;  // sorted, unique
  CommStats stats;
};

struct ExecuteOptions {
  std::uint64_t ceiling = kDefaultCeiling;
  unsigned threads = 1;
};

ExecutionResult execute(const Instance& instance, const MappingSchema& schema,
                        const ExecuteOptions& options = {});

// Brute force: every output whose dependencies are all present. No schema.
std::vector<OutputId> oracle_outputs(const Instance& instance,
                                     std::uint64_t ceiling = kDefaultCeiling);

}  // namespace mrt
