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
#include <limits>
#include <vector>

#include "seismicwave/scored_heap.h"

namespace seismicwave {

/// Marks an unused slot in a fixed-width result row (fewer than k hits).
inline constexpr DocId kNoDoc = std::numeric_limits<DocId>::max();

/// Per-query top-k lists ordered by (score desc, doc asc). The same layout
/// stores exact ground truth and approximate search output; approximate rows
/// may end in kNoDoc / -inf padding slots.
struct GroundTruth {
  std::size_t k = 0;
  std::vector<std::vector<ScoredDoc>> queries;

  bool operator==(const GroundTruth&) const = default;
};

/// Pads a result row to exactly k slots.
std::vector<ScoredDoc> pad_row(std::vector<ScoredDoc> row, std::size_t k);

}  // namespace seismicwave
