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

#include "seismicwave/forward_index.h"

#include <algorithm>

namespace seismicwave {

ForwardIndex::ForwardIndex(std::vector<SparseVector> docs, std::uint64_t dim)
    : docs_(std::move(docs)), dim_(dim) {
  for (const auto& d : docs_) {
    nnz_ += d.size();
    if (!d.empty()) {
      extent_ = std::max<std::size_t>(extent_, std::size_t{d.ids().back()} + 1);
    }
  }
  dim_ = std::max<std::uint64_t>(dim_, extent_);
}

ForwardIndex build_forward(std::vector<SparseVector> collection) {
  return ForwardIndex(std::move(collection));
}

}  // namespace seismicwave
