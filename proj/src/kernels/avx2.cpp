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

// Compiled with -mavx2 (and deliberately without -mfma, so the double kernel
// rounds exactly like the scalar reference). Only reached through the
// dispatcher after a CPUID check.

#include <immintrin.h>

#include <bit>

#include "mrt/kernels.hpp"

namespace mrt::kernels::avx2 {

namespace {

// Low 64 bits of the lane-wise product. AVX2 has no 64-bit mullo, so split
// each lane into 32-bit halves: lo*lo + ((lo*hi + hi*lo) << 32).
inline __m256i mullo_epi64(__m256i a, __m256i b) {
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a, b_hi), _mm256_mul_epu32(a_hi, b));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

// Per-lane popcount via the nibble lookup table and a horizontal byte sum.
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

}  // namespace

void gemm_accumulate(ConstTile<std::int64_t> a, ConstTile<std::int64_t> b, Tile<std::int64_t> c) {
  const std::size_t n = b.cols;
  const std::size_t vec_end = n - n % 4;
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::int64_t* crow = c.data + i * c.stride;
    for (std::size_t p = 0; p < a.cols; ++p) {
      const std::int64_t av = a.at(i, p);
      const std::int64_t* brow = b.data + p * b.stride;
      const __m256i va = _mm256_set1_epi64x(av);
      std::size_t j = 0;
      for (; j < vec_end; j += 4) {
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(brow + j));
        __m256i vc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(crow + j));
        vc = _mm256_add_epi64(vc, mullo_epi64(va, vb));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(crow + j), vc);
      }
      for (; j < n; ++j) {
        const auto prod = static_cast<std::uint64_t>(av) * static_cast<std::uint64_t>(brow[j]);
        crow[j] = static_cast<std::int64_t>(static_cast<std::uint64_t>(crow[j]) + prod);
      }
    }
  }
}

void gemm_accumulate(ConstTile<double> a, ConstTile<double> b, Tile<double> c) {
  const std::size_t n = b.cols;
  const std::size_t vec_end = n - n % 4;
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* crow = c.data + i * c.stride;
    for (std::size_t p = 0; p < a.cols; ++p) {
      const double av = a.at(i, p);
      const double* brow = b.data + p * b.stride;
      const __m256d va = _mm256_set1_pd(av);
      std::size_t j = 0;
      for (; j < vec_end; j += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(brow + j));
        _mm256_storeu_pd(crow + j, _mm256_add_pd(_mm256_loadu_pd(crow + j), prod));
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void hamming_matches(std::uint64_t x, std::span<const std::uint64_t> words,
                     unsigned min_distance, unsigned max_distance,
                     std::vector<std::uint32_t>& out) {
  const __m256i vx = _mm256_set1_epi64x(static_cast<long long>(x));
  // lo-1 < d < hi+1 with signed 64-bit compares; distances are 0..64.
  const __m256i below = _mm256_set1_epi64x(static_cast<long long>(min_distance) - 1);
  const __m256i above = _mm256_set1_epi64x(static_cast<long long>(max_distance) + 1);
  const std::size_t n = words.size();
  const std::size_t vec_end = n - n % 4;
  std::size_t i = 0;
  for (; i < vec_end; i += 4) {
    const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words.data() + i));
    const __m256i d = popcount_epi64(_mm256_xor_si256(vx, w));
    const __m256i ok = _mm256_and_si256(_mm256_cmpgt_epi64(d, below), _mm256_cmpgt_epi64(above, d));
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(ok));
    while (mask != 0) {
      const int lane = std::countr_zero(static_cast<unsigned>(mask));
      out.push_back(static_cast<std::uint32_t>(i + lane));
      mask &= mask - 1;
    }
  }
  for (; i < n; ++i) {
    const auto d = static_cast<unsigned>(std::popcount(x ^ words[i]));
    if (d >= min_distance && d <= max_distance) out.push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace mrt::kernels::avx2
