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

#include "seismicwave/search.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace seismicwave {

namespace {

void fill_order(std::span<const float> scores, bool ordered, std::vector<std::size_t>& order) {
  order.resize(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (ordered) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  }
}

bool is_ordered(Traversal policy, std::size_t list_rank) {
  switch (policy) {
    case Traversal::kArbitrary:
      return false;
    case Traversal::kFirstListOrdered:
      return list_rank == 0;
    case Traversal::kAllListsOrdered:
      return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(Traversal t) {
  switch (t) {
    case Traversal::kArbitrary:
      return "arbitrary";
    case Traversal::kFirstListOrdered:
      return "first";
    case Traversal::kAllListsOrdered:
      return "all";
  }
  return "unknown";
}

std::optional<Traversal> parse_traversal(std::string_view name) {
  if (name == "arbitrary") return Traversal::kArbitrary;
  if (name == "first") return Traversal::kFirstListOrdered;
  if (name == "all") return Traversal::kAllListsOrdered;
  return std::nullopt;
}

void SearchParams::validate() const {
  if (k == 0) {
    throw std::invalid_argument("k must be positive");
  }
  if (cut == 0) {
    throw std::invalid_argument("cut must be positive");
  }
  if (!(heap_factor > 0.0f && heap_factor <= 1.0f)) {
    throw std::invalid_argument("heap_factor must be in (0,1]");
  }
}

SearchStats& SearchStats::operator+=(const SearchStats& other) {
  lists_visited += other.lists_visited;
  blocks_scored += other.blocks_scored;
  blocks_evaluated += other.blocks_evaluated;
  docs_scored += other.docs_scored;
  if (per_list_nanos.size() < other.per_list_nanos.size()) {
    per_list_nanos.resize(other.per_list_nanos.size(), 0);
  }
  for (std::size_t i = 0; i < other.per_list_nanos.size(); ++i) {
    per_list_nanos[i] += other.per_list_nanos[i];
  }
  return *this;
}

std::vector<float> summary_scores(const SparseVector& q, std::span<const PostingBlock> list) {
  std::vector<float> out;
  out.reserve(list.size());
  for (const auto& block : list) {
    out.push_back(dot(q, block.summary));
  }
  return out;
}

std::vector<std::size_t> traversal_order(std::span<const float> scores, Traversal policy,
                                         std::size_t list_rank) {
  std::vector<std::size_t> order;
  fill_order(scores, is_ordered(policy, list_rank), order);
  return order;
}

Searcher::Searcher(const InvertedIndex& index, const ForwardIndex& fwd)
    : index_(index), fwd_(fwd) {}

SearchStats Searcher::search_into(const SparseVector& q, const SearchParams& p,
                                  ScoredHeap& heap, const SearchOptions& opts) {
  using Clock = std::chrono::steady_clock;
  SearchStats stats;
  dense_.assign(q);
  const auto coords = query_coordinates(q);
  const std::size_t lists = std::min(p.cut, coords.size());
  if (opts.time_lists) {
    stats.per_list_nanos.assign(lists, 0);
  }

  for (std::size_t rank = 0; rank < lists; ++rank) {
    const auto start = opts.time_lists ? Clock::now() : Clock::time_point{};
    const TermId term = coords[rank];
    ++stats.lists_visited;
    if (const PostingList* list = index_.list(term)) {
      scores_.resize(list->size());
      for (std::size_t b = 0; b < list->size(); ++b) {
        scores_[b] = dense_.dot((*list)[b].summary);
      }
      stats.blocks_scored += list->size();
      fill_order(scores_, is_ordered(p.obt, rank), order_);

      for (std::size_t b : order_) {
        const PostingBlock& block = (*list)[b];
        const float threshold = heap.min();
        const bool evaluate = p.heap_factor * scores_[b] > threshold;
        if (opts.observer) {
          opts.observer(BlockProbe{rank, term, b, scores_[b], threshold, evaluate, &block});
        }
        if (!evaluate) {
          continue;
        }
        ++stats.blocks_evaluated;
        for (DocId d : block.docs) {
          if (heap.contains(d)) {
            continue;
          }
          ++stats.docs_scored;
          heap.insert(dense_.dot(fwd_[d]), d);
        }
      }
    }
    if (opts.time_lists) {
      stats.per_list_nanos[rank] = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
    }
  }
  return stats;
}

SearchResult Searcher::search(const SparseVector& q, const SearchParams& p,
                              const SearchOptions& opts) {
  ScoredHeap heap(p.k);
  SearchResult out;
  out.stats = search_into(q, p, heap, opts);
  out.results = heap.sorted();
  return out;
}

SearchResult search_seismic(const SparseVector& q, const InvertedIndex& index,
                            const ForwardIndex& fwd, const SearchParams& p,
                            const SearchOptions& opts) {
  p.validate();
  Searcher searcher(index, fwd);
  return searcher.search(q, p, opts);
}

}  // namespace seismicwave
