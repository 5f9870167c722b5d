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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seismicwave/sparse_vector.h"

namespace seismicwave {

/// Document store: doc id i maps to the i-th ingested vector.
class ForwardIndex {
 public:
  ForwardIndex() = default;

  /// `dim` is the number of columns; it is raised to cover the largest id.
  explicit ForwardIndex(std::vector<SparseVector> docs, std::uint64_t dim = 0);

  const SparseVector& operator[](DocId id) const { return docs_[id]; }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  std::uint64_t dim() const { return dim_; }
  /// One past the largest stored coordinate id (<= dim()).
  std::size_t extent() const { return extent_; }
  std::size_t nnz() const { return nnz_; }
  std::span<const SparseVector> docs() const { return docs_; }

  bool operator==(const ForwardIndex& other) const = default;

 private:
  std::vector<SparseVector> docs_;
  std::uint64_t dim_ = 0;
  std::size_t extent_ = 0;
  std::size_t nnz_ = 0;
};

ForwardIndex build_forward(std::vector<SparseVector> collection);

}  // namespace seismicwave
