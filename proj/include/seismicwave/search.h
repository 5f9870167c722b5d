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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "seismicwave/forward_index.h"
#include "seismicwave/inverted_index.h"
#include "seismicwave/scored_heap.h"
#include "seismicwave/sparse_vector.h"

namespace seismicwave {

/// Order in which the blocks of a posting list are visited.
enum class Traversal {
  kArbitrary,         // stored order
  kFirstListOrdered,  // descending summary score on the first list only
  kAllListsOrdered,   // descending summary score on every list
};

std::string_view to_string(Traversal t);
std::optional<Traversal> parse_traversal(std::string_view name);

struct SearchParams {
  std::size_t k = 10;
  std::size_t cut = 10;
  float heap_factor = 1.0f;
  Traversal obt = Traversal::kArbitrary;
  bool expand = false;  // kappa-NN refinement, applied by the caller

  void validate() const;
};

struct SearchStats {
  std::uint64_t lists_visited = 0;
  std::uint64_t blocks_scored = 0;     // summary inner products
  std::uint64_t blocks_evaluated = 0;  // blocks whose docs were scored
  std::uint64_t docs_scored = 0;       // forward-index inner products
  std::vector<std::uint64_t> per_list_nanos;  // indexed by list rank; empty unless timed

  SearchStats& operator+=(const SearchStats& other);
};

/// One gate decision, reported to an optional observer.
struct BlockProbe {
  std::size_t list_rank;
  TermId term;
  std::size_t block;
  float summary_score;
  float threshold;  // heap.min() at visit time
  bool evaluated;
  const PostingBlock* posting_block;
};

using BlockObserver = std::function<void(const BlockProbe&)>;

struct SearchOptions {
  bool time_lists = false;
  BlockObserver observer;
};

struct SearchResult {
  std::vector<ScoredDoc> results;  // (score desc, doc asc)
  SearchStats stats;
};

/// dot(q, summary) for every block, in block order.
std::vector<float> summary_scores(const SparseVector& q, std::span<const PostingBlock> list);

/// Block visiting order for the list at `list_rank` in the query's cut sequence.
std::vector<std::size_t> traversal_order(std::span<const float> scores, Traversal policy,
                                         std::size_t list_rank);

/// Reusable per-thread query processor. Holds a dense query buffer, so one
/// instance must not be shared between threads.
class Searcher {
 public:
  Searcher(const InvertedIndex& index, const ForwardIndex& fwd);

  /// Base term-at-a-time search into `heap` (capacity = k). Ignores p.expand.
  SearchStats search_into(const SparseVector& q, const SearchParams& p, ScoredHeap& heap,
                          const SearchOptions& opts = {});

  SearchResult search(const SparseVector& q, const SearchParams& p,
                      const SearchOptions& opts = {});

  const DenseQuery& dense_query() const { return dense_; }
  const InvertedIndex& index() const { return index_; }
  const ForwardIndex& forward() const { return fwd_; }

 private:
  const InvertedIndex& index_;
  const ForwardIndex& fwd_;
  DenseQuery dense_;
  std::vector<float> scores_;
  std::vector<std::size_t> order_;
};

SearchResult search_seismic(const SparseVector& q, const InvertedIndex& index,
                            const ForwardIndex& fwd, const SearchParams& p,
                            const SearchOptions& opts = {});

}  // namespace seismicwave
