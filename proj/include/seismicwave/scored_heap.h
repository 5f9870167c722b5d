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
#include <unordered_set>
#include <vector>

#include "seismicwave/sparse_vector.h"

namespace seismicwave {

struct ScoredDoc {
  DocId doc;
  float score;

  bool operator==(const ScoredDoc&) const = default;
};

/// Ranking order used everywhere: higher score first, then lower doc id.
inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.score != b.score) {
    return a.score > b.score;
  }
  return a.doc < b.doc;
}

/// Bounded top-k min-heap with membership dedup.
///
/// The root is the worst-ranked entry, so eviction and threshold lookups are
/// O(1) and inserts are O(log k). A doc id can occupy at most one slot.
class ScoredHeap {
 public:
  explicit ScoredHeap(std::size_t capacity);

  /// Returns true if the entry was stored. Rejected when `doc` is already
  /// present, or when the heap is full and (score, doc) does not rank before
  /// the current worst entry.
  bool insert(float score, DocId doc);

  /// Smallest held score, or -inf while fewer than k entries are held.
  float min() const;

  bool contains(DocId doc) const { return members_.contains(doc); }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return entries_.size() == capacity_; }

  /// Doc ids currently held, in unspecified order.
  std::vector<DocId> ids() const;

  /// Entries ordered by (score desc, doc asc).
  std::vector<ScoredDoc> sorted() const;

 private:
  std::size_t capacity_;
  std::vector<ScoredDoc> entries_;
  std::unordered_set<DocId> members_;
};

}  // namespace seismicwave
