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

// Similarity join on b-bit strings by Hamming distance, and its schemas.
//
// Strings are written w = w_1 w_2 ... w_c with w_1 in the most significant
// bits; "segment i" and "piece p" count from there, zero-based.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mrt/model.hpp"

namespace mrt::hamming {

enum class DistanceMode { Exactly, AtMost };

// All 2^b strings as inputs; outputs are unordered pairs at distance exactly
// d (or 1..d for AtMost).
class HammingSpace final : public ProblemSpace {
 public:
  explicit HammingSpace(unsigned b, unsigned d = 1, DistanceMode mode = DistanceMode::Exactly);

  unsigned bits() const { return b_; }
  unsigned distance() const { return d_; }
  DistanceMode mode() const { return mode_; }

  std::string name() const override;
  std::uint64_t input_count() const override;
  std::uint64_t output_count() const override;
  std::uint64_t input_index(InputId id) const override;
  InputId input_at(std::uint64_t index) const override;
  void for_each_output(const std::function<void(const OutputId&)>& fn) const override;
  void dependency(const OutputId& output, std::vector<InputId>& deps) const override;
  void outputs_among(std::span<const InputId> inputs, std::vector<OutputId>& out) const override;

 private:
  unsigned min_distance() const { return mode_ == DistanceMode::Exactly ? d_ : 1; }

  unsigned b_;
  unsigned d_;
  DistanceMode mode_;
  std::vector<std::uint64_t> flip_masks_;  // every mask of weight in [min_distance, d]
};

// Equal-length segments of a b-bit string.
class SegmentCoords {
 public:
  SegmentCoords(unsigned b, unsigned segments);

  unsigned bits() const { return b_; }
  unsigned segments() const { return count_; }
  unsigned length() const { return len_; }

  std::uint64_t segment(std::uint64_t word, unsigned i) const;
  // The string left after deleting the segments in `deleted` (bit i set =
  // segment i deleted), remaining segments kept in order.
  std::uint64_t residual(std::uint64_t word, std::uint64_t deleted) const;

 private:
  unsigned b_;
  unsigned count_;
  unsigned len_;
};

// Weight cells for the weight-based schemas: `dims` pieces of b/dims bits,
// piece weights grouped into runs of k consecutive weights, with the top
// weight b/dims folded into the last group.
class WeightGrid {
 public:
  WeightGrid(unsigned b, unsigned dims, unsigned k);

  unsigned bits() const { return b_; }
  unsigned dims() const { return dims_; }
  unsigned side() const { return k_; }
  unsigned piece_length() const { return len_; }
  unsigned groups_per_dim() const { return groups_; }
  std::uint64_t cell_count() const;

  unsigned piece_weight(std::uint64_t word, unsigned piece) const;
  unsigned group_of(unsigned weight) const { return group_[weight]; }
  // Lowest weight of its group and nonzero: such pieces are copied to the
  // next lower cell along their dimension.
  bool on_lower_border(unsigned weight) const;

  std::uint64_t cell_of(std::uint64_t word) const;
  // Mixed-radix cell index of per-dimension group coordinates.
  std::uint64_t cell_index(const std::vector<unsigned>& groups) const;

 private:
  unsigned b_;
  unsigned dims_;
  unsigned k_;
  unsigned len_;
  unsigned groups_;
  std::vector<unsigned> group_;
};

// c groups of 2^(b-b/c) reducers; w goes to the Group-i reducer keyed by w
// with segment i deleted. Reducer id: (i << (b - b/c)) | residual.
std::unique_ptr<MappingSchema> splitting_schema(unsigned b, unsigned c);

// Two halves, cells of side k; equivalent to weight_schema_d(b, 2, k).
std::unique_ptr<MappingSchema> weight_schema(unsigned b, unsigned k);
std::unique_ptr<MappingSchema> weight_schema_d(unsigned b, unsigned dims, unsigned k);

// One reducer per string s holding the b strings at distance 1 from s
// (plus s itself when include_center). Reducer id: s.
std::unique_ptr<MappingSchema> ball2_schema(unsigned b, bool include_center = false);

// Reducers keyed by (d-subset of the k segments, residual string). Reducer
// id: (lexicographic subset rank << (b - d*b/k)) | residual.
std::unique_ptr<MappingSchema> segment_deletion_schema(unsigned b, unsigned k, unsigned d);

// Reference enumeration of all pairs at distance exactly d (or 1..d).
std::vector<OutputId> hd_oracle(unsigned b, unsigned d, DistanceMode mode = DistanceMode::Exactly,
                                std::uint64_t ceiling = kDefaultCeiling);

}  // namespace mrt::hamming
