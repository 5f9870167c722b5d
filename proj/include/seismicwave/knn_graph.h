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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "seismicwave/format_error.h"
#include "seismicwave/forward_index.h"
#include "seismicwave/inverted_index.h"
#include "seismicwave/scored_heap.h"
#include "seismicwave/search.h"

namespace seismicwave {

/// kappa-regular directed graph: each document links to the kappa documents
/// with the largest inner product, ordered by (score desc, id asc), self
/// excluded. Stored row-major as n * kappa ids.
class KnnGraph {
 public:
  KnnGraph() = default;

  /// Throws std::invalid_argument if the table breaks the graph invariants.
  KnnGraph(std::size_t n, std::size_t kappa, std::vector<DocId> neighbors);

  std::size_t n() const { return n_; }
  std::size_t kappa() const { return kappa_; }
  std::span<const DocId> neighbors(DocId u) const {
    return {neighbors_.data() + static_cast<std::size_t>(u) * kappa_, kappa_};
  }
  std::span<const DocId> table() const { return neighbors_; }

  /// Keeps the first `kappa` neighbors of every node.
  KnnGraph truncated(std::size_t kappa) const;

  bool operator==(const KnnGraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t kappa_ = 0;
  std::vector<DocId> neighbors_;
};

/// Index and query settings for the index-accelerated construction. Defaults
/// are the published construction settings; lambda and beta are capped at the
/// collection size.
struct ApproxGraphParams {
  std::size_t lambda = 10000;
  std::size_t beta = 2000;
  double alpha = 0.6;
  std::size_t cut = 15;
  float heap_factor = 0.7f;
  Traversal obt = Traversal::kArbitrary;
  std::uint64_t seed = BuildParams{}.seed;
};

/// O(n^2) reference construction. Requires n > kappa >= 1.
KnnGraph build_knn_exact(const ForwardIndex& fwd, std::size_t kappa, std::size_t threads = 0);

/// Retrieves kappa + 1 candidates per document from an inverted index built
/// with `params`, drops the document itself, and pads from an exact scan when
/// fewer than kappa neighbors come back.
KnnGraph build_knn_approx(const ForwardIndex& fwd, std::size_t kappa,
                          const ApproxGraphParams& params = {}, std::size_t threads = 0);

/// Same, reusing an index already built over `fwd`.
KnnGraph build_knn_approx(const ForwardIndex& fwd, const InvertedIndex& index, std::size_t kappa,
                          const ApproxGraphParams& params, std::size_t threads = 0);

/// Mean over nodes of |N_a(u) ∩ N_b(u)| / kappa. Graphs must match in shape.
double neighbor_overlap(const KnnGraph& a, const KnnGraph& b);

struct RefineStats {
  std::uint64_t docs_scored = 0;
  std::uint64_t inserted = 0;
};

/// Single-hop expansion of the heap's current members through the graph.
/// Every unseen neighbor is scored and offered to the heap.
RefineStats refine_with_knn(const DenseQuery& q, ScoredHeap& heap, const KnnGraph& graph,
                            const ForwardIndex& fwd);
RefineStats refine_with_knn(const SparseVector& q, ScoredHeap& heap, const KnnGraph& graph,
                            const ForwardIndex& fwd);

/// Base search followed by refinement when p.expand is set. `graph` may be
/// null only when p.expand is false.
struct WaveResult {
  std::vector<ScoredDoc> results;
  SearchStats stats;
  RefineStats refine;

  std::uint64_t total_work() const {
    return stats.blocks_evaluated + stats.docs_scored + refine.docs_scored;
  }
};

WaveResult search_wave(Searcher& searcher, const KnnGraph* graph, const SparseVector& q,
                       const SearchParams& p, const SearchOptions& opts = {});

// SWKG storage: 24-byte header ("SWKG", u32 version, u64 n, u64 kappa, all
// little-endian) followed by n * kappa ids of bits_per_id(n) bits each,
// packed LSB-first and zero-padded to a whole byte.
inline constexpr std::uint32_t kGraphFormatVersion = 1;

std::size_t bits_per_id(std::size_t n);
std::uint64_t graph_payload_bytes(std::size_t n, std::size_t kappa);
std::uint64_t graph_file_bytes(std::size_t n, std::size_t kappa);

void graph_write(const KnnGraph& g, std::ostream& out);
void graph_write(const KnnGraph& g, const std::filesystem::path& path);
KnnGraph graph_read(std::istream& in);
KnnGraph graph_read(const std::filesystem::path& path);

}  // namespace seismicwave
