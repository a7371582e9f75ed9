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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

namespace mrt {

struct InputId {
  std::uint64_t value = 0;
  auto operator<=>(const InputId&) const = default;
};

struct ReducerId {
  std::uint64_t value = 0;
  auto operator<=>(const ReducerId&) const = default;
};

// Outputs may need more than 64 bits (a pair of 62-bit strings), so the
// opaque encoding is three words. Unused words are zero.
struct OutputId {
  std::array<std::uint64_t, 3> parts{};
  auto operator<=>(const OutputId&) const = default;
};

std::string to_string(const OutputId& o);

// Per-problem encodings. Every encoder validates its arguments and throws
// InvalidParameter on violations.
namespace codec {

// Bit strings of length b <= 62, stored as the unsigned integer they spell.
InputId bits(std::uint64_t word, unsigned b);

// Undirected edge {u, v}, u != v, stored as (low << 32) | high.
InputId edge(std::uint32_t u, std::uint32_t v);
std::pair<std::uint32_t, std::uint32_t> edge_nodes(InputId id);

enum class MatrixTag : std::uint64_t { R = 0, S = 1 };

// Entry (tag, row, col) of an n x n matrix; row and col below 2^31.
InputId matrix_entry(MatrixTag tag, std::uint32_t row, std::uint32_t col);
struct MatrixEntry {
  MatrixTag tag;
  std::uint32_t row;
  std::uint32_t col;
  bool operator==(const MatrixEntry&) const = default;
};
MatrixEntry matrix_entry_of(InputId id);

// Unordered pair of strings, stored sorted.
OutputId string_pair(std::uint64_t a, std::uint64_t b);
// Unordered node triple, stored sorted.
OutputId node_triple(std::uint32_t a, std::uint32_t b, std::uint32_t c);
// 2-path end-middle-end: (middle, low end, high end).
OutputId two_path(std::uint32_t middle, std::uint32_t end_a, std::uint32_t end_b);
// Product cell t_ik.
OutputId matrix_cell(std::uint32_t i, std::uint32_t k);

}  // namespace codec
}  // namespace mrt

template <>
struct std::hash<mrt::InputId> {
  std::size_t operator()(const mrt::InputId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<mrt::ReducerId> {
  std::size_t operator()(const mrt::ReducerId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<mrt::OutputId> {
  std::size_t operator()(const mrt::OutputId& o) const noexcept {
    std::size_t h = 0;
    for (auto p : o.parts) h = h * 0x9E3779B97F4A7C15ULL + std::hash<std::uint64_t>{}(p);
    return h;
  }
};
