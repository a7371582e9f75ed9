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

#include "mrt/kernels.hpp"

namespace mrt::kernels::scalar {

void gemm_accumulate(ConstTile<std::int64_t> a, ConstTile<std::int64_t> b, Tile<std::int64_t> c) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t p = 0; p < a.cols; ++p) {
      // unsigned so that overflow wraps instead of being undefined
      const auto av = static_cast<std::uint64_t>(a.at(i, p));
      for (std::size_t j = 0; j < b.cols; ++j) {
        const auto prod = av * static_cast<std::uint64_t>(b.at(p, j));
        c.at(i, j) = static_cast<std::int64_t>(static_cast<std::uint64_t>(c.at(i, j)) + prod);
      }
    }
  }
}

void gemm_accumulate(ConstTile<double> a, ConstTile<double> b, Tile<double> c) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t p = 0; p < a.cols; ++p) {
      const double av = a.at(i, p);
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += av * b.at(p, j);
    }
  }
}

void hamming_matches(std::uint64_t x, std::span<const std::uint64_t> words,
                     unsigned min_distance, unsigned max_distance,
                     std::vector<std::uint32_t>& out) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto d = static_cast<unsigned>(std::popcount(x ^ words[i]));
    if (d >= min_distance && d <= max_distance) out.push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace mrt::kernels::scalar
