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

// Data-parallel inner loops used by the reducers.
//
// Every kernel has a scalar reference in `kernels::scalar` and, on x86-64, an
// AVX2 variant in `kernels::avx2`. The unqualified entry points dispatch at
// runtime to the best variant the CPU supports; MRT_ISA=scalar in the
// environment (or set_isa) forces the reference path. The variants are
// required to agree bit for bit on integer kernels.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mrt::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Best ISA supported by this CPU and build.
Isa detected_isa();

// ISA used by the dispatching entry points.
Isa active_isa();

// Throws InvalidParameter if `isa` is not supported here.
void set_isa(Isa isa);

// Row-major tile with a leading dimension (elements between rows).
template <class T>
struct Tile {
  T* data;
  std::size_t rows;
  std::size_t cols;
  std::size_t stride;

  T& at(std::size_t r, std::size_t c) const { return data[r * stride + c]; }
};

template <class T>
using ConstTile = Tile<const T>;

// c += a * b, with a: m x k, b: k x n, c: m x n. Integer arithmetic wraps
// modulo 2^64 in both variants.
void gemm_accumulate(ConstTile<std::int64_t> a, ConstTile<std::int64_t> b, Tile<std::int64_t> c);
void gemm_accumulate(ConstTile<double> a, ConstTile<double> b, Tile<double> c);

// Appends to `out` the index of every word in `words` whose Hamming
// distance to `x` lies in [min_distance, max_distance].
void hamming_matches(std::uint64_t x, std::span<const std::uint64_t> words,
                     unsigned min_distance, unsigned max_distance,
                     std::vector<std::uint32_t>& out);

namespace scalar {
void gemm_accumulate(ConstTile<std::int64_t> a, ConstTile<std::int64_t> b, Tile<std::int64_t> c);
void gemm_accumulate(ConstTile<double> a, ConstTile<double> b, Tile<double> c);
void hamming_matches(std::uint64_t x, std::span<const std::uint64_t> words,
                     unsigned min_distance, unsigned max_distance,
                     std::vector<std::uint32_t>& out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define MRT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void gemm_accumulate(ConstTile<std::int64_t> a, ConstTile<std::int64_t> b, Tile<std::int64_t> c);
void gemm_accumulate(ConstTile<double> a, ConstTile<double> b, Tile<double> c);
void hamming_matches(std::uint64_t x, std::span<const std::uint64_t> words,
                     unsigned min_distance, unsigned max_distance,
                     std::vector<std::uint32_t>& out);
}  // namespace avx2
#else
#define MRT_HAVE_AVX2_KERNELS 0
#endif

}  // namespace mrt::kernels
