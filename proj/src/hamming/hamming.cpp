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

#include "mrt/hamming.hpp"

#include <algorithm>
#include <bit>

#include "mrt/error.hpp"
#include "mrt/kernels.hpp"

namespace mrt::hamming {

namespace {

constexpr std::size_t kPairwiseLimit = 4096;

std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void check_bits(unsigned b) {
  if (b < 1 || b > 62) throw InvalidParameter("b must be in [1, 62], got " + std::to_string(b));
}

// All masks over b bits with popcount in [lo, hi], ascending.
std::vector<std::uint64_t> masks_with_weight(unsigned b, unsigned lo, unsigned hi) {
  std::vector<std::uint64_t> masks;
  for (unsigned w = lo; w <= hi && w <= b; ++w) {
    if (w == 0) continue;
    // Gosper's hack over the w-subsets of b bits
    std::uint64_t m = low_mask(w);
    const std::uint64_t limit = std::uint64_t{1} << b;
    while (m < limit) {
      masks.push_back(m);
      const std::uint64_t c = m & (~m + 1);
      const std::uint64_t r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
  std::sort(masks.begin(), masks.end());
  return masks;
}

std::uint64_t count_pairs(unsigned b, unsigned lo, unsigned hi) {
  BigInt total = 0;
  for (unsigned w = std::max(lo, 1u); w <= hi && w <= b; ++w) total += binomial(b, w);
  total <<= b;
  total /= 2;
  return total.convert_to<std::uint64_t>();
}

}  // namespace

// ---------------------------------------------------------------------------
// HammingSpace

HammingSpace::HammingSpace(unsigned b, unsigned d, DistanceMode mode) : b_(b), d_(d), mode_(mode) {
  check_bits(b);
  if (d < 1 || d > b) throw InvalidParameter("distance must be in [1, b]");
  if (BigInt(binomial(b, d)) > 100'000'000) throw InvalidParameter("too many flip masks");
  flip_masks_ = masks_with_weight(b, min_distance(), d);
}

std::string HammingSpace::name() const {
  return "hamming(b=" + std::to_string(b_) + (mode_ == DistanceMode::Exactly ? ",d=" : ",d<=") +
         std::to_string(d_) + ")";
}

std::uint64_t HammingSpace::input_count() const { return std::uint64_t{1} << b_; }

std::uint64_t HammingSpace::output_count() const { return count_pairs(b_, min_distance(), d_); }

std::uint64_t HammingSpace::input_index(InputId id) const {
  if ((id.value >> b_) != 0) throw InvalidParameter("string does not fit in b bits");
  return id.value;
}

InputId HammingSpace::input_at(std::uint64_t index) const { return InputId{index}; }

void HammingSpace::for_each_output(const std::function<void(const OutputId&)>& fn) const {
  const std::uint64_t n = input_count();
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t m : flip_masks_) {
      const std::uint64_t y = x ^ m;
      if (y > x) fn(codec::string_pair(x, y));
    }
  }
}

void HammingSpace::dependency(const OutputId& output, std::vector<InputId>& deps) const {
  deps.push_back(InputId{output.parts[0]});
  deps.push_back(InputId{output.parts[1]});
}

void HammingSpace::outputs_among(std::span<const InputId> inputs, std::vector<OutputId>& out) const {
  if (inputs.size() < 2) return;
  if (inputs.size() <= kPairwiseLimit) {
    std::vector<std::uint64_t> words(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) words[i] = inputs[i].value;
    std::vector<std::uint32_t> hits;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
      hits.clear();
      kernels::hamming_matches(words[i], std::span(words).subspan(i + 1), min_distance(), d_, hits);
      for (auto h : hits) out.push_back(codec::string_pair(words[i], words[i + 1 + h]));
    }
    return;
  }
  // Large reducers: probe each string's neighborhood instead of all pairs.
  for (InputId x : inputs) {
    for (std::uint64_t m : flip_masks_) {
      const InputId y{x.value ^ m};
      if (y > x && std::binary_search(inputs.begin(), inputs.end(), y)) {
        out.push_back(codec::string_pair(x.value, y.value));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// SegmentCoords / WeightGrid

SegmentCoords::SegmentCoords(unsigned b, unsigned segments) : b_(b), count_(segments), len_(0) {
  check_bits(b);
  if (segments < 1 || b % segments != 0) {
    throw InvalidParameter("segment count " + std::to_string(segments) + " must divide b=" +
                           std::to_string(b));
  }
  len_ = b / segments;
}

std::uint64_t SegmentCoords::segment(std::uint64_t word, unsigned i) const {
  return (word >> (b_ - (i + 1) * len_)) & low_mask(len_);
}

std::uint64_t SegmentCoords::residual(std::uint64_t word, std::uint64_t deleted) const {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < count_; ++i) {
    if ((deleted >> i) & 1u) continue;
    out = (out << len_) | segment(word, i);
  }
  return out;
}

WeightGrid::WeightGrid(unsigned b, unsigned dims, unsigned k) : b_(b), dims_(dims), k_(k) {
  check_bits(b);
  if (dims < 1 || b % dims != 0) throw InvalidParameter("dimension count must divide b");
  len_ = b / dims;
  if (k < 1 || len_ % k != 0) {
    throw InvalidParameter("cell side k=" + std::to_string(k) + " must divide piece length " +
                           std::to_string(len_));
  }
  groups_ = len_ / k;
  group_.resize(len_ + 1);
  for (unsigned w = 0; w <= len_; ++w) group_[w] = std::min(w / k, groups_ - 1);
}

std::uint64_t WeightGrid::cell_count() const {
  std::uint64_t n = 1;
  for (unsigned i = 0; i < dims_; ++i) n *= groups_;
  return n;
}

unsigned WeightGrid::piece_weight(std::uint64_t word, unsigned piece) const {
  return static_cast<unsigned>(std::popcount((word >> (b_ - (piece + 1) * len_)) & low_mask(len_)));
}

bool WeightGrid::on_lower_border(unsigned weight) const {
  return weight > 0 && weight == group_[weight] * k_;
}

std::uint64_t WeightGrid::cell_index(const std::vector<unsigned>& groups) const {
  std::uint64_t idx = 0;
  for (unsigned g : groups) idx = idx * groups_ + g;
  return idx;
}

std::uint64_t WeightGrid::cell_of(std::uint64_t word) const {
  std::uint64_t idx = 0;
  for (unsigned p = 0; p < dims_; ++p) idx = idx * groups_ + group_of(piece_weight(word, p));
  return idx;
}

// ---------------------------------------------------------------------------
// Schemas

namespace {

void enumerate_range(std::uint64_t count, const std::function<void(ReducerId)>& fn) {
  for (std::uint64_t i = 0; i < count; ++i) fn(ReducerId{i});
}

class SplittingSchema final : public MappingSchema {
 public:
  SplittingSchema(unsigned b, unsigned c) : seg_(b, c), residual_bits_(b - seg_.length()) {}

  std::string name() const override {
    return "splitting(b=" + std::to_string(seg_.bits()) + ",c=" + std::to_string(seg_.segments()) + ")";
  }
  std::uint64_t reducer_count() const override {
    return std::uint64_t{seg_.segments()} << residual_bits_;
  }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    enumerate_range(reducer_count(), fn);
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    for (unsigned i = 0; i < seg_.segments(); ++i) {
      out.push_back(ReducerId{(std::uint64_t{i} << residual_bits_) |
                              seg_.residual(input.value, std::uint64_t{1} << i)});
    }
  }
  std::uint64_t capacity() const override { return std::uint64_t{1} << seg_.length(); }

 private:
  SegmentCoords seg_;
  unsigned residual_bits_;
};

class WeightSchema final : public MappingSchema {
 public:
  WeightSchema(unsigned b, unsigned dims, unsigned k) : grid_(b, dims, k) {
    if (grid_.cell_count() > 100'000'000) throw InvalidParameter("weight grid too large");
    capacity_ = compute_capacity();
  }

  std::string name() const override {
    return "weight(b=" + std::to_string(grid_.bits()) + ",d=" + std::to_string(grid_.dims()) +
           ",k=" + std::to_string(grid_.side()) + ")";
  }
  std::uint64_t reducer_count() const override { return grid_.cell_count(); }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    enumerate_range(reducer_count(), fn);
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    const unsigned dims = grid_.dims();
    std::vector<unsigned> groups(dims), weights(dims);
    for (unsigned p = 0; p < dims; ++p) {
      weights[p] = grid_.piece_weight(input.value, p);
      groups[p] = grid_.group_of(weights[p]);
    }
    out.push_back(ReducerId{grid_.cell_index(groups)});
    for (unsigned p = 0; p < dims; ++p) {
      if (!grid_.on_lower_border(weights[p])) continue;
      --groups[p];
      out.push_back(ReducerId{grid_.cell_index(groups)});
      ++groups[p];
    }
  }
  std::uint64_t capacity() const override { return capacity_; }

 private:
  // Exact maximum cell load, from the piece-weight distribution: a weight
  // vector (w_1..w_d) is carried by prod C(L, w_p) strings.
  std::uint64_t compute_capacity() const {
    const unsigned dims = grid_.dims();
    const unsigned len = grid_.piece_length();
    std::vector<std::uint64_t> per_weight(len + 1);
    for (unsigned w = 0; w <= len; ++w) per_weight[w] = binomial(len, w).convert_to<std::uint64_t>();
    std::vector<std::uint64_t> load(grid_.cell_count(), 0);
    std::vector<unsigned> weights(dims, 0), groups(dims);
    while (true) {
      std::uint64_t strings = 1;
      for (unsigned p = 0; p < dims; ++p) {
        strings *= per_weight[weights[p]];
        groups[p] = grid_.group_of(weights[p]);
      }
      load[grid_.cell_index(groups)] += strings;
      for (unsigned p = 0; p < dims; ++p) {
        if (!grid_.on_lower_border(weights[p])) continue;
        --groups[p];
        load[grid_.cell_index(groups)] += strings;
        ++groups[p];
      }
      unsigned p = 0;
      while (p < dims && weights[p] == len) weights[p++] = 0;
      if (p == dims) break;
      ++weights[p];
    }
    return *std::max_element(load.begin(), load.end());
  }

  WeightGrid grid_;
  std::uint64_t capacity_ = 0;
};

class Ball2Schema final : public MappingSchema {
 public:
  Ball2Schema(unsigned b, bool include_center) : b_(b), include_center_(include_center) {
    check_bits(b);
    if (b < 2) throw InvalidParameter("Ball-2 needs b >= 2");
  }

  std::string name() const override {
    return std::string(include_center_ ? "ball2+center" : "ball2") + "(b=" + std::to_string(b_) + ")";
  }
  std::uint64_t reducer_count() const override { return std::uint64_t{1} << b_; }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    enumerate_range(reducer_count(), fn);
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    if (include_center_) out.push_back(ReducerId{input.value});
    for (unsigned i = 0; i < b_; ++i) out.push_back(ReducerId{input.value ^ (std::uint64_t{1} << i)});
  }
  std::uint64_t capacity() const override { return b_ + (include_center_ ? 1 : 0); }

 private:
  unsigned b_;
  bool include_center_;
};

class SegmentDeletionSchema final : public MappingSchema {
 public:
  SegmentDeletionSchema(unsigned b, unsigned k, unsigned d) : seg_(b, k), d_(d) {
    if (d < 1 || d >= k) throw InvalidParameter("segment-deletion needs 1 <= d < k");
    if (binomial(k, d) > 1'000'000) throw InvalidParameter("too many segment subsets");
    // d-subsets of {0..k-1} in lexicographic order of their sorted elements
    std::vector<unsigned> pick(d);
    for (unsigned i = 0; i < d; ++i) pick[i] = i;
    while (true) {
      std::uint64_t mask = 0;
      for (unsigned s : pick) mask |= std::uint64_t{1} << s;
      subsets_.push_back(mask);
      int i = static_cast<int>(d) - 1;
      while (i >= 0 && pick[i] == k - d + static_cast<unsigned>(i)) --i;
      if (i < 0) break;
      ++pick[i];
      for (unsigned j = static_cast<unsigned>(i) + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
    residual_bits_ = b - d * seg_.length();
    const unsigned rank_bits = static_cast<unsigned>(std::bit_width(subsets_.size() - 1));
    if (residual_bits_ + rank_bits > 64) throw InvalidParameter("reducer id space exceeds 64 bits");
  }

  std::string name() const override {
    return "segdel(b=" + std::to_string(seg_.bits()) + ",k=" + std::to_string(seg_.segments()) +
           ",d=" + std::to_string(d_) + ")";
  }
  std::uint64_t reducer_count() const override {
    return static_cast<std::uint64_t>(subsets_.size()) << residual_bits_;
  }
  void for_each_reducer(const std::function<void(ReducerId)>& fn) const override {
    enumerate_range(reducer_count(), fn);
  }
  void assign(InputId input, std::vector<ReducerId>& out) const override {
    for (std::uint64_t rank = 0; rank < subsets_.size(); ++rank) {
      out.push_back(ReducerId{(rank << residual_bits_) | seg_.residual(input.value, subsets_[rank])});
    }
  }
  std::uint64_t capacity() const override { return std::uint64_t{1} << (d_ * seg_.length()); }

 private:
  SegmentCoords seg_;
  unsigned d_;
  unsigned residual_bits_ = 0;
  std::vector<std::uint64_t> subsets_;
};

}  // namespace

std::unique_ptr<MappingSchema> splitting_schema(unsigned b, unsigned c) {
  return std::make_unique<SplittingSchema>(b, c);
}

std::unique_ptr<MappingSchema> weight_schema(unsigned b, unsigned k) {
  if (b % 2 != 0) throw InvalidParameter("weight schema needs even b");
  return std::make_unique<WeightSchema>(b, 2, k);
}

std::unique_ptr<MappingSchema> weight_schema_d(unsigned b, unsigned dims, unsigned k) {
  return std::make_unique<WeightSchema>(b, dims, k);
}

std::unique_ptr<MappingSchema> ball2_schema(unsigned b, bool include_center) {
  return std::make_unique<Ball2Schema>(b, include_center);
}

std::unique_ptr<MappingSchema> segment_deletion_schema(unsigned b, unsigned k, unsigned d) {
  return std::make_unique<SegmentDeletionSchema>(b, k, d);
}

std::vector<OutputId> hd_oracle(unsigned b, unsigned d, DistanceMode mode, std::uint64_t ceiling) {
  if (b > 16) throw SizingError("oracle string length b", b, 16);
  const HammingSpace space(b, d, mode);
  if (space.output_count() > ceiling) throw SizingError("output count", space.output_count(), ceiling);
  std::vector<OutputId> out;
  out.reserve(space.output_count());
  space.for_each_output([&](const OutputId& o) { out.push_back(o); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mrt::hamming
