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

#include "seismicwave/forward_index.h"
#include "seismicwave/sparse_vector.h"

namespace seismicwave {

struct BuildParams {
  std::size_t lambda = 4000;  // max postings kept per list
  std::size_t beta = 400;     // max blocks per list
  double alpha = 0.5;         // summary mass retention
  std::uint64_t seed = 0x5eed5eed5eedULL;

  /// Throws std::invalid_argument naming the violated bound.
  void validate() const;

  bool operator==(const BuildParams&) const = default;
};

struct PostingBlock {
  std::vector<DocId> docs;
  SparseVector summary;

  bool operator==(const PostingBlock&) const = default;
};

using PostingList = std::vector<PostingBlock>;

/// Per-coordinate posting lists, each pruned to the top-lambda documents by
/// that coordinate's value and split into clustered blocks with summaries.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// `terms` strictly increasing, one non-empty list per term.
  InvertedIndex(BuildParams params, std::vector<TermId> terms, std::vector<PostingList> lists);

  const BuildParams& params() const { return params_; }

  /// nullptr when the coordinate has no postings.
  const PostingList* list(TermId term) const;

  std::span<const TermId> terms() const { return terms_; }
  std::span<const PostingList> lists() const { return lists_; }

  std::size_t num_lists() const { return lists_.size(); }
  std::size_t num_blocks() const;
  std::size_t num_postings() const;
  std::size_t num_summary_entries() const;

  bool operator==(const InvertedIndex&) const = default;

 private:
  BuildParams params_;
  std::vector<TermId> terms_;
  std::vector<PostingList> lists_;
};

/// Number of blocks a list of `entries` postings is split into: beta scaled
/// by the list's fill of lambda, rounded up, clamped to [1, beta].
std::size_t blocks_for_list(std::size_t entries, const BuildParams& params);

/// Seeded one-pass clustering. Samples min(beta, |entries|) distinct centroids
/// and assigns each entry to the centroid with the largest inner product (ties
/// to the lowest centroid index). Empty groups are dropped. When
/// |entries| <= beta every entry becomes its own group.
std::vector<std::vector<DocId>> cluster_list(std::span<const DocId> entries,
                                             const ForwardIndex& fwd, std::size_t beta,
                                             std::uint64_t seed);

/// Coordinate-wise max of the group, pruned to the shortest prefix (by
/// descending weight, ties by ascending id) holding alpha of the total mass.
SparseVector summarize(std::span<const DocId> group, const ForwardIndex& fwd, double alpha);

/// Top-lambda docs of one coordinate ordered by (value desc, doc asc).
std::vector<DocId> select_top_postings(std::vector<std::pair<DocId, float>> postings,
                                       std::size_t lambda);

/// `threads` = 0 uses the hardware concurrency. Output does not depend on it.
InvertedIndex build_inverted(const ForwardIndex& fwd, const BuildParams& params,
                             std::size_t threads = 0);

}  // namespace seismicwave
