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

#include "seismicwave/knn_graph.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "binary_io.h"
#include "postings.h"
#include "seismicwave/parallel.h"

namespace seismicwave {

namespace {

void check_build_args(const ForwardIndex& fwd, std::size_t kappa) {
  if (kappa == 0) {
    throw std::invalid_argument("kappa must be positive");
  }
  if (fwd.size() <= kappa) {
    throw std::invalid_argument("kappa must be smaller than the collection size");
  }
}

// Top-kappa over all v != u given the scored candidates; every doc absent from
// `candidates` scores 0.
std::vector<ScoredDoc> select_neighbors(std::vector<ScoredDoc> candidates, DocId self,
                                        std::size_t n, std::size_t kappa,
                                        const std::vector<std::uint8_t>& is_candidate) {
  const std::size_t keep = std::min(kappa, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), ranks_before);
  candidates.resize(keep);

  std::vector<ScoredDoc> zeros;
  for (DocId v = 0; v < n && zeros.size() < kappa; ++v) {
    if (v != self && !is_candidate[v]) {
      zeros.push_back({v, 0.0f});
    }
  }
  std::vector<ScoredDoc> merged;
  merged.reserve(candidates.size() + zeros.size());
  std::merge(candidates.begin(), candidates.end(), zeros.begin(), zeros.end(),
             std::back_inserter(merged), ranks_before);
  merged.resize(kappa);
  return merged;
}

std::vector<ScoredDoc> exact_neighbors_by_scan(const ForwardIndex& fwd, DocId u,
                                               std::size_t kappa) {
  std::vector<ScoredDoc> all;
  all.reserve(fwd.size());
  for (DocId v = 0; v < fwd.size(); ++v) {
    if (v != u) {
      all.push_back({v, dot(fwd[u], fwd[v])});
    }
  }
  const std::size_t keep = std::min(kappa, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    ranks_before);
  all.resize(keep);
  return all;
}

}  // namespace

KnnGraph::KnnGraph(std::size_t n, std::size_t kappa, std::vector<DocId> neighbors)
    : n_(n), kappa_(kappa), neighbors_(std::move(neighbors)) {
  if (n == 0 ? kappa != 0 : kappa >= n) {
    throw std::invalid_argument("kappa must be smaller than n");
  }
  if (neighbors_.size() != n * kappa) {
    throw std::invalid_argument("neighbor table must hold n * kappa ids");
  }
  std::vector<DocId> row;
  for (std::size_t u = 0; u < n; ++u) {
    const auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(u * kappa);
    row.assign(first, first + static_cast<std::ptrdiff_t>(kappa));
    for (DocId v : row) {
      if (v >= n) {
        throw std::invalid_argument("neighbor id out of range at node " + std::to_string(u));
      }
      if (v == u) {
        throw std::invalid_argument("self loop at node " + std::to_string(u));
      }
    }
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw std::invalid_argument("duplicate neighbor at node " + std::to_string(u));
    }
  }
}

KnnGraph KnnGraph::truncated(std::size_t kappa) const {
  if (kappa > kappa_) {
    throw std::invalid_argument("cannot truncate to a larger kappa");
  }
  std::vector<DocId> table;
  table.reserve(n_ * kappa);
  for (std::size_t u = 0; u < n_; ++u) {
    auto row = neighbors(static_cast<DocId>(u));
    table.insert(table.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(kappa));
  }
  return KnnGraph(n_, kappa, std::move(table));
}

KnnGraph build_knn_exact(const ForwardIndex& fwd, std::size_t kappa, std::size_t threads) {
  check_build_args(fwd, kappa);
  const std::size_t n = fwd.size();
  const detail::FullPostings postings(fwd);
  std::vector<DocId> table(n * kappa);

  struct Scratch {
    std::vector<float> acc;
    std::vector<std::uint8_t> seen;
    std::vector<DocId> touched;
  };
  const std::size_t workers = resolve_threads(threads);
  std::vector<Scratch> scratch(workers);

  parallel_for(n, workers, [&](std::size_t worker, std::size_t index) {
    Scratch& s = scratch[worker];
    if (s.acc.empty()) {
      s.acc.assign(n, 0.0f);
      s.seen.assign(n, 0);
    }
    const auto u = static_cast<DocId>(index);
    const SparseVector& doc = fwd[u];
    // Coordinates ascend, so each accumulated score is bit-identical to dot(u, v).
    for (std::size_t e = 0; e < doc.size(); ++e) {
      const float w = doc.weights()[e];
      for (const auto& [v, vw] : postings.list(doc.ids()[e])) {
        if (!s.seen[v]) {
          s.seen[v] = 1;
          s.touched.push_back(v);
        }
        s.acc[v] += w * vw;
      }
    }
    std::vector<ScoredDoc> candidates;
    candidates.reserve(s.touched.size());
    for (DocId v : s.touched) {
      if (v != u) {
        candidates.push_back({v, s.acc[v]});
      }
    }
    // `u` itself is marked seen whenever it has any coordinate, which also
    // keeps it out of the zero-score fill.
    auto best = select_neighbors(std::move(candidates), u, n, kappa, s.seen);
    for (std::size_t j = 0; j < kappa; ++j) {
      table[index * kappa + j] = best[j].doc;
    }
    for (DocId v : s.touched) {
      s.acc[v] = 0.0f;
      s.seen[v] = 0;
    }
    s.touched.clear();
  });
  return KnnGraph(n, kappa, std::move(table));
}

KnnGraph build_knn_approx(const ForwardIndex& fwd, std::size_t kappa,
                          const ApproxGraphParams& params, std::size_t threads) {
  check_build_args(fwd, kappa);
  BuildParams build;
  build.lambda = std::min(params.lambda, fwd.size());
  build.beta = std::min(params.beta, build.lambda);
  build.alpha = params.alpha;
  build.seed = params.seed;
  const InvertedIndex index = build_inverted(fwd, build, threads);
  return build_knn_approx(fwd, index, kappa, params, threads);
}

KnnGraph build_knn_approx(const ForwardIndex& fwd, const InvertedIndex& index, std::size_t kappa,
                          const ApproxGraphParams& params, std::size_t threads) {
  check_build_args(fwd, kappa);
  const std::size_t n = fwd.size();
  SearchParams sp;
  sp.k = kappa + 1;
  sp.cut = params.cut;
  sp.heap_factor = params.heap_factor;
  sp.obt = params.obt;
  sp.validate();

  std::vector<DocId> table(n * kappa);
  const std::size_t workers = resolve_threads(threads);
  std::vector<Searcher> searchers;
  searchers.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    searchers.emplace_back(index, fwd);
  }

  parallel_for(n, workers, [&](std::size_t worker, std::size_t index_u) {
    const auto u = static_cast<DocId>(index_u);
    auto found = searchers[worker].search(fwd[u], sp).results;
    std::erase_if(found, [u](const ScoredDoc& s) { return s.doc == u; });
    if (found.size() > kappa) {
      found.resize(kappa);
    }
    if (found.size() < kappa) {
      std::unordered_set<DocId> have;
      for (const auto& s : found) {
        have.insert(s.doc);
      }
      for (const auto& s : exact_neighbors_by_scan(fwd, u, kappa + found.size())) {
        if (found.size() == kappa) {
          break;
        }
        if (!have.contains(s.doc)) {
          found.push_back(s);
        }
      }
      std::sort(found.begin(), found.end(), ranks_before);
    }
    for (std::size_t j = 0; j < kappa; ++j) {
      table[index_u * kappa + j] = found[j].doc;
    }
  });
  return KnnGraph(n, kappa, std::move(table));
}

double neighbor_overlap(const KnnGraph& a, const KnnGraph& b) {
  if (a.n() != b.n() || a.kappa() != b.kappa()) {
    throw std::invalid_argument("graphs differ in shape");
  }
  if (a.n() == 0 || a.kappa() == 0) {
    return 1.0;
  }
  double total = 0.0;
  std::vector<DocId> ra;
  std::vector<DocId> rb;
  for (std::size_t u = 0; u < a.n(); ++u) {
    auto na = a.neighbors(static_cast<DocId>(u));
    auto nb = b.neighbors(static_cast<DocId>(u));
    ra.assign(na.begin(), na.end());
    rb.assign(nb.begin(), nb.end());
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    std::vector<DocId> common;
    std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(common));
    total += static_cast<double>(common.size()) / static_cast<double>(a.kappa());
  }
  return total / static_cast<double>(a.n());
}

RefineStats refine_with_knn(const DenseQuery& q, ScoredHeap& heap, const KnnGraph& graph,
                            const ForwardIndex& fwd) {
  if (graph.n() != fwd.size()) {
    throw std::invalid_argument("graph and forward index cover different collections");
  }
  RefineStats stats;
  const auto seeds = heap.sorted();
  for (const auto& seed : seeds) {
    for (DocId v : graph.neighbors(seed.doc)) {
      if (heap.contains(v)) {
        continue;
      }
      ++stats.docs_scored;
      if (heap.insert(q.dot(fwd[v]), v)) {
        ++stats.inserted;
      }
    }
  }
  return stats;
}

RefineStats refine_with_knn(const SparseVector& q, ScoredHeap& heap, const KnnGraph& graph,
                            const ForwardIndex& fwd) {
  const DenseQuery dense(q);
  return refine_with_knn(dense, heap, graph, fwd);
}

WaveResult search_wave(Searcher& searcher, const KnnGraph* graph, const SparseVector& q,
                       const SearchParams& p, const SearchOptions& opts) {
  if (p.expand && graph == nullptr) {
    throw std::invalid_argument("expansion requested without a kappa-NN graph");
  }
  ScoredHeap heap(p.k);
  WaveResult out;
  out.stats = searcher.search_into(q, p, heap, opts);
  if (p.expand) {
    out.refine = refine_with_knn(searcher.dense_query(), heap, *graph, searcher.forward());
  }
  out.results = heap.sorted();
  return out;
}

std::size_t bits_per_id(std::size_t n) {
  if (n <= 2) {
    return 1;
  }
  return static_cast<std::size_t>(std::bit_width(n - 1));
}

std::uint64_t graph_payload_bytes(std::size_t n, std::size_t kappa) {
  const unsigned __int128 bits =
      static_cast<unsigned __int128>(n) * kappa * bits_per_id(n);
  return static_cast<std::uint64_t>((bits + 7) / 8);
}

std::uint64_t graph_file_bytes(std::size_t n, std::size_t kappa) {
  return 24 + graph_payload_bytes(n, kappa);
}

void graph_write(const KnnGraph& g, std::ostream& out) {
  detail::BinaryWriter w(out);
  w.bytes("SWKG", 4);
  w.u32(kGraphFormatVersion);
  w.u64(g.n());
  w.u64(g.kappa());

  const std::size_t bits = bits_per_id(g.n());
  std::vector<unsigned char> payload(graph_payload_bytes(g.n(), g.kappa()), 0);
  std::uint64_t pos = 0;
  for (DocId id : g.table()) {
    for (std::size_t b = 0; b < bits; ++b, ++pos) {
      if ((std::uint64_t{id} >> b) & 1U) {
        payload[pos / 8] |= static_cast<unsigned char>(1U << (pos % 8));
      }
    }
  }
  w.bytes(payload.data(), payload.size());
  if (!out) {
    throw std::runtime_error("failed to write graph");
  }
}

void graph_write(const KnnGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  graph_write(g, out);
}

KnnGraph graph_read(std::istream& in) {
  detail::BinaryReader r(in);
  char magic[4];
  r.read_bytes(magic, 4, "graph header");
  if (std::string(magic, 4) != "SWKG") {
    r.fail("bad graph magic");
  }
  if (r.u32("graph header") != kGraphFormatVersion) {
    r.fail("unsupported graph version");
  }
  const std::uint64_t n = r.u64("graph header");
  const std::uint64_t kappa = r.u64("graph header");
  if (n > (std::uint64_t{1} << 32)) {
    r.fail("graph larger than the id space");
  }
  if (n == 0 ? kappa != 0 : kappa >= n) {
    r.fail("kappa must be smaller than n");
  }
  const std::uint64_t payload_bytes = graph_payload_bytes(n, kappa);
  r.require(payload_bytes, 1, "graph payload");
  std::vector<unsigned char> payload(payload_bytes);
  const std::uint64_t payload_start = r.offset();
  r.read_bytes(payload.data(), payload_bytes, "graph payload");

  const std::size_t bits = bits_per_id(n);
  std::vector<DocId> table(n * kappa);
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::uint64_t id = 0;
    for (std::size_t b = 0; b < bits; ++b, ++pos) {
      id |= static_cast<std::uint64_t>((payload[pos / 8] >> (pos % 8)) & 1U) << b;
    }
    if (id >= n) {
      throw FormatError("neighbor id " + std::to_string(id) + " out of range",
                        payload_start + (pos - 1) / 8);
    }
    table[i] = static_cast<DocId>(id);
  }
  for (; pos < payload_bytes * 8; ++pos) {
    if ((payload[pos / 8] >> (pos % 8)) & 1U) {
      throw FormatError("nonzero padding bits", payload_start + pos / 8);
    }
  }
  r.expect_end();
  try {
    return KnnGraph(n, kappa, std::move(table));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid graph: ") + e.what(), payload_start);
  }
}

KnnGraph graph_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return graph_read(in);
}

}  // namespace seismicwave
