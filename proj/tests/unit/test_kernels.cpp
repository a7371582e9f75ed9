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

#include <bit>
#include <cstring>
#include <random>

#include "doctest.h"
#include "mrt/error.hpp"
#include "mrt/kernels.hpp"

using namespace mrt;
using kernels::ConstTile;
using kernels::Tile;

namespace {

template <class T>
std::vector<T> random_values(std::size_t count, std::mt19937_64& rng) {
  std::vector<T> out(count);
  if constexpr (std::is_integral_v<T>) {
    std::uniform_int_distribution<std::int64_t> dist(-1000, 1000);
    for (auto& x : out) x = dist(rng);
  } else {
    std::uniform_real_distribution<double> dist(-1, 1);
    for (auto& x : out) x = dist(rng);
  }
  return out;
}

// Runs `fn` on an m x k by k x n product stored with padded strides and
// returns the c buffer, padding included.
template <class T, class Fn>
std::vector<T> run_gemm(Fn fn, std::size_t m, std::size_t k, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t sa = k + 3, sb = n + 1, sc = n + 5;
  const auto a = random_values<T>(m * sa, rng);
  const auto b = random_values<T>(k * sb, rng);
  auto c = random_values<T>(m * sc, rng);
  fn(ConstTile<T>{a.data(), m, k, sa}, ConstTile<T>{b.data(), k, n, sb}, Tile<T>{c.data(), m, n, sc});
  return c;
}

}  // namespace

TEST_CASE("scalar gemm matches a naive product") {
  const std::size_t m = 5, k = 7, n = 3;
  std::mt19937_64 rng(1);
  const auto a = random_values<std::int64_t>(m * k, rng);
  const auto b = random_values<std::int64_t>(k * n, rng);
  std::vector<std::int64_t> c(m * n, 2);
  kernels::scalar::gemm_accumulate(ConstTile<std::int64_t>{a.data(), m, k, k},
                                   ConstTile<std::int64_t>{b.data(), k, n, n},
                                   Tile<std::int64_t>{c.data(), m, n, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t want = 2;
      for (std::size_t x = 0; x < k; ++x) want += a[i * k + x] * b[x * n + j];
      CHECK(c[i * n + j] == want);
    }
  }
}

#if MRT_HAVE_AVX2_KERNELS
TEST_CASE("avx2 gemm agrees with scalar") {
  if (kernels::detected_isa() != kernels::Isa::Avx2) return;
  for (std::size_t m : {1u, 3u, 8u, 17u}) {
    for (std::size_t k : {1u, 4u, 9u}) {
      for (std::size_t n : {1u, 3u, 4u, 5u, 16u, 31u}) {
        CAPTURE(m);
        CAPTURE(k);
        CAPTURE(n);
        const auto seed = m * 1000 + k * 100 + n;
        auto si = run_gemm<std::int64_t>(
            [](auto a, auto b, auto c) { kernels::scalar::gemm_accumulate(a, b, c); }, m, k, n, seed);
        auto vi = run_gemm<std::int64_t>(
            [](auto a, auto b, auto c) { kernels::avx2::gemm_accumulate(a, b, c); }, m, k, n, seed);
        CHECK(si == vi);
        auto sd = run_gemm<double>(
            [](auto a, auto b, auto c) { kernels::scalar::gemm_accumulate(a, b, c); }, m, k, n, seed);
        auto vd = run_gemm<double>(
            [](auto a, auto b, auto c) { kernels::avx2::gemm_accumulate(a, b, c); }, m, k, n, seed);
        REQUIRE(sd.size() == vd.size());
        CHECK(std::memcmp(sd.data(), vd.data(), sd.size() * sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("avx2 integer gemm wraps like scalar") {
  if (kernels::detected_isa() != kernels::Isa::Avx2) return;
  const std::int64_t big = std::int64_t{1} << 40;
  std::vector<std::int64_t> a(4 * 4, big), b(4 * 4, big + 7);
  std::vector<std::int64_t> c1(16, -3), c2(16, -3);
  kernels::scalar::gemm_accumulate(ConstTile<std::int64_t>{a.data(), 4, 4, 4},
                                   ConstTile<std::int64_t>{b.data(), 4, 4, 4},
                                   Tile<std::int64_t>{c1.data(), 4, 4, 4});
  kernels::avx2::gemm_accumulate(ConstTile<std::int64_t>{a.data(), 4, 4, 4},
                                 ConstTile<std::int64_t>{b.data(), 4, 4, 4},
                                 Tile<std::int64_t>{c2.data(), 4, 4, 4});
  CHECK(c1 == c2);
}

TEST_CASE("avx2 hamming_matches agrees with scalar") {
  if (kernels::detected_isa() != kernels::Isa::Avx2) return;
  std::mt19937_64 rng(9);
  for (std::size_t count : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
    std::vector<std::uint64_t> words(count);
    for (auto& w : words) w = rng() & 0xFFFF;
    for (auto [lo, hi] : {std::pair{1u, 1u}, {0u, 2u}, {2u, 5u}, {0u, 64u}}) {
      const std::uint64_t x = rng() & 0xFFFF;
      std::vector<std::uint32_t> s, v;
      kernels::scalar::hamming_matches(x, words, lo, hi, s);
      kernels::avx2::hamming_matches(x, words, lo, hi, v);
      CHECK(s == v);
    }
  }
}
#endif

TEST_CASE("scalar hamming_matches") {
  const std::vector<std::uint64_t> words{0b0000, 0b0001, 0b0011, 0b0111, 0b1111};
  std::vector<std::uint32_t> out{99};
  kernels::scalar::hamming_matches(0, words, 1, 2, out);
  CHECK(out == std::vector<std::uint32_t>{99, 1, 2});
  for (std::uint64_t x = 0; x < 16; ++x) {
    std::vector<std::uint32_t> all;
    kernels::hamming_matches(x, words, 0, 64, all);
    CHECK(all.size() == words.size());
    std::vector<std::uint32_t> exact;
    kernels::hamming_matches(x, words, 2, 2, exact);
    for (auto i : exact) CHECK(std::popcount(x ^ words[i]) == 2);
  }
}

TEST_CASE("ISA selection") {
  const auto original = kernels::active_isa();
  kernels::set_isa(kernels::Isa::Scalar);
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);
  CHECK(kernels::isa_name(kernels::Isa::Scalar) == "scalar");
  if (kernels::detected_isa() == kernels::Isa::Scalar) {
    CHECK_THROWS_AS(kernels::set_isa(kernels::Isa::Avx2), InvalidParameter);
  } else {
    kernels::set_isa(kernels::Isa::Avx2);
    CHECK(kernels::active_isa() == kernels::Isa::Avx2);
  }
  kernels::set_isa(original);
}
