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
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "seismicwave/forward_index.h"

namespace seismicwave::detail {

/// Unpruned postings of every coordinate in ascending doc order, CSR layout.
struct FullPostings {
  std::vector<std::size_t> offsets;  // dim + 1
  std::vector<std::pair<DocId, float>> entries;

  explicit FullPostings(const ForwardIndex& fwd) : offsets(fwd.extent() + 1, 0) {
    for (const auto& doc : fwd.docs()) {
      for (TermId t : doc.ids()) {
        ++offsets[t + 1];
      }
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    entries.resize(offsets.back());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (DocId d = 0; d < fwd.size(); ++d) {
      const SparseVector& doc = fwd[d];
      for (std::size_t e = 0; e < doc.size(); ++e) {
        entries[cursor[doc.ids()[e]]++] = {d, doc.weights()[e]};
      }
    }
  }

  std::size_t dim() const { return offsets.size() - 1; }

  std::span<const std::pair<DocId, float>> list(std::size_t term) const {
    return {entries.data() + offsets[term], offsets[term + 1] - offsets[term]};
  }
};

}  // namespace seismicwave::detail
