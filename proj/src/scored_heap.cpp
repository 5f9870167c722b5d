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

#include "seismicwave/scored_heap.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace seismicwave {

ScoredHeap::ScoredHeap(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw std::invalid_argument("heap capacity must be positive");
  }
  entries_.reserve(capacity + 1);
  members_.reserve(capacity * 2);
}

bool ScoredHeap::insert(float score, DocId doc) {
  if (members_.contains(doc)) {
    return false;
  }
  const ScoredDoc entry{doc, score};
  if (entries_.size() < capacity_) {
    entries_.push_back(entry);
    std::push_heap(entries_.begin(), entries_.end(), ranks_before);
    members_.insert(doc);
    return true;
  }
  // root holds the worst-ranked entry
  if (!ranks_before(entry, entries_.front())) {
    return false;
  }
  std::pop_heap(entries_.begin(), entries_.end(), ranks_before);
  members_.erase(entries_.back().doc);
  entries_.back() = entry;
  std::push_heap(entries_.begin(), entries_.end(), ranks_before);
  members_.insert(doc);
  return true;
}

float ScoredHeap::min() const {
  if (entries_.size() < capacity_) {
    return -std::numeric_limits<float>::infinity();
  }
  return entries_.front().score;
}

std::vector<DocId> ScoredHeap::ids() const {
  std::vector<DocId> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    out.push_back(e.doc);
  }
  return out;
}

std::vector<ScoredDoc> ScoredHeap::sorted() const {
  std::vector<ScoredDoc> out(entries_);
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

}  // namespace seismicwave
