// Copyright 2026-present the seismicwave project
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

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace seismicwave {

using TermId = std::uint32_t;
using DocId = std::uint32_t;

/// Sparse embedding stored as parallel arrays of strictly increasing term ids
/// and finite, nonzero weights. Immutable once constructed.
class SparseVector {
 public:
  SparseVector() = default;

  /// Throws std::invalid_argument if the arrays violate the invariants.
  SparseVector(std::vector<TermId> ids, std::vector<float> weights);

  /// Convenience for literals and tests: {(id, weight), ...}, must be sorted.
  SparseVector(std::initializer_list<std::pair<TermId, float>> entries);

  /// Builds from unsorted (id, weight) pairs. Duplicate ids are rejected,
  /// zero weights are dropped.
  static SparseVector from_unsorted(std::vector<std::pair<TermId, float>> entries);

  /// Returns a description of the first violated invariant, if any.
  static std::optional<std::string> check(std::span<const TermId> ids,
                                          std::span<const float> weights);

  std::span<const TermId> ids() const { return ids_; }
  std::span<const float> weights() const { return weights_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  /// Weight at coordinate `id`, 0 when absent.
  float at(TermId id) const;

  bool operator==(const SparseVector& other) const = default;

 private:
  std::vector<TermId> ids_;
  std::vector<float> weights_;
};

/// Inner product over the shared support, accumulated in ascending id order.
float dot(const SparseVector& u, const SparseVector& v);

/// nz(q) ordered by descending weight, ties by ascending id.
std::vector<TermId> query_coordinates(const SparseVector& q);

/// Query scattered into a dense array so that scoring a sparse vector costs
/// one pass over that vector. Scores are bit-identical to dot(q, v): terms are
/// summed in ascending id order and absent coordinates contribute +0.
class DenseQuery {
 public:
  DenseQuery() = default;
  explicit DenseQuery(const SparseVector& q) { assign(q); }

  void assign(const SparseVector& q);
  float dot(const SparseVector& v) const;

 private:
  std::vector<float> dense_;
  std::vector<TermId> touched_;
};

}  // namespace seismicwave
