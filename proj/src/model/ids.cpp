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

#include "mrt/ids.hpp"

#include <algorithm>

#include "mrt/error.hpp"

namespace mrt {

std::string to_string(const OutputId& o) {
  return "(" + std::to_string(o.parts[0]) + "," + std::to_string(o.parts[1]) +
         "," + std::to_string(o.parts[2]) + ")";
}

namespace codec {

InputId bits(std::uint64_t word, unsigned b) {
  if (b == 0 || b > 62) throw InvalidParameter("bit-string length must be in [1, 62]");
  if ((word >> b) != 0) throw InvalidParameter("word does not fit in " + std::to_string(b) + " bits");
  return InputId{word};
}

InputId edge(std::uint32_t u, std::uint32_t v) {
  if (u == v) throw InvalidParameter("self-loop {" + std::to_string(u) + "," + std::to_string(v) + "}");
  if (u > v) std::swap(u, v);
  return InputId{(std::uint64_t{u} << 32) | v};
}

std::pair<std::uint32_t, std::uint32_t> edge_nodes(InputId id) {
  return {static_cast<std::uint32_t>(id.value >> 32),
          static_cast<std::uint32_t>(id.value & 0xFFFFFFFFu)};
}

InputId matrix_entry(MatrixTag tag, std::uint32_t row, std::uint32_t col) {
  if (row >= (1u << 31) || col >= (1u << 31)) throw InvalidParameter("matrix index too large");
  return InputId{(static_cast<std::uint64_t>(tag) << 62) | (std::uint64_t{row} << 31) | col};
}

MatrixEntry matrix_entry_of(InputId id) {
  constexpr std::uint64_t mask31 = (std::uint64_t{1} << 31) - 1;
  return {static_cast<MatrixTag>(id.value >> 62),
          static_cast<std::uint32_t>((id.value >> 31) & mask31),
          static_cast<std::uint32_t>(id.value & mask31)};
}

OutputId string_pair(std::uint64_t a, std::uint64_t b) {
  if (a > b) std::swap(a, b);
  return OutputId{{a, b, 0}};
}

OutputId node_triple(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  std::array<std::uint32_t, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  if (v[0] == v[1] || v[1] == v[2]) throw InvalidParameter("triple nodes must be distinct");
  return OutputId{{v[0], v[1], v[2]}};
}

OutputId two_path(std::uint32_t middle, std::uint32_t end_a, std::uint32_t end_b) {
  if (end_a > end_b) std::swap(end_a, end_b);
  if (end_a == end_b || middle == end_a || middle == end_b)
    throw InvalidParameter("2-path nodes must be distinct");
  return OutputId{{middle, end_a, end_b}};
}

OutputId matrix_cell(std::uint32_t i, std::uint32_t k) { return OutputId{{i, k, 0}}; }

}  // namespace codec
}  // namespace mrt
