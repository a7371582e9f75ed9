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

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "mrt/error.hpp"
#include "mrt/kernels.hpp"

namespace mrt::kernels {

namespace {

Isa initial_isa() {
  const char* forced = std::getenv("MRT_ISA");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
#if MRT_HAVE_AVX2_KERNELS
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
    throw InvalidParameter("AVX2 kernels are not supported on this CPU/build");
  }
  active().store(isa, std::memory_order_relaxed);
}

void gemm_accumulate(ConstTile<std::int64_t> a, ConstTile<std::int64_t> b, Tile<std::int64_t> c) {
#if MRT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::gemm_accumulate(a, b, c);
#endif
  scalar::gemm_accumulate(a, b, c);
}

void gemm_accumulate(ConstTile<double> a, ConstTile<double> b, Tile<double> c) {
#if MRT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::gemm_accumulate(a, b, c);
#endif
  scalar::gemm_accumulate(a, b, c);
}

void hamming_matches(std::uint64_t x, std::span<const std::uint64_t> words,
                     unsigned min_distance, unsigned max_distance,
                     std::vector<std::uint32_t>& out) {
#if MRT_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::hamming_matches(x, words, min_distance, max_distance, out);
#endif
  scalar::hamming_matches(x, words, min_distance, max_distance, out);
}

}  // namespace mrt::kernels
