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

#include "seismicwave/inverted_index.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "postings.h"
#include "seismicwave/parallel.h"

namespace seismicwave {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t list_seed(std::uint64_t seed, TermId term) {
  return splitmix64(seed ^ splitmix64(term));
}

// Scratch reused across lists by one build worker.
struct ClusterScratch {
  std::vector<std::uint32_t> head;  // coordinate -> first slot in `postings`, or npos
  std::vector<std::uint32_t> next;
  std::vector<std::pair<std::uint32_t, float>> postings;  // (centroid, weight)
  std::vector<TermId> touched;
  std::vector<float> scores;

  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();
};

std::vector<std::vector<DocId>> cluster_with(std::span<const DocId> entries,
                                             const ForwardIndex& fwd, std::size_t beta,
                                             std::uint64_t seed, ClusterScratch& scratch) {
  std::vector<std::vector<DocId>> groups;
  if (entries.empty()) {
    return groups;
  }
  if (entries.size() <= beta) {
    groups.reserve(entries.size());
    for (DocId d : entries) {
      groups.push_back({d});
    }
    return groups;
  }

  // Partial Fisher-Yates over positions. Plain modulo keeps the draw sequence
  // identical across standard library implementations.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> positions(entries.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  for (std::size_t i = 0; i < beta; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (entries.size() - i));
    std::swap(positions[i], positions[j]);
  }

  // Small inverted index over the centroids. Slots for one coordinate are
  // chained in ascending centroid order.
  if (scratch.head.size() < fwd.extent()) {
    scratch.head.assign(fwd.extent(), ClusterScratch::npos);
  }
  scratch.postings.clear();
  scratch.next.clear();
  scratch.touched.clear();
  for (std::size_t c = beta; c-- > 0;) {
    const SparseVector& centroid = fwd[entries[positions[c]]];
    for (std::size_t e = 0; e < centroid.size(); ++e) {
      const TermId term = centroid.ids()[e];
      const auto slot = static_cast<std::uint32_t>(scratch.postings.size());
      scratch.postings.emplace_back(static_cast<std::uint32_t>(c), centroid.weights()[e]);
      if (scratch.head[term] == ClusterScratch::npos) {
        scratch.touched.push_back(term);
      }
      scratch.next.push_back(scratch.head[term]);
      scratch.head[term] = slot;
    }
  }

  groups.assign(beta, {});
  scratch.scores.assign(beta, 0.0f);
  for (DocId d : entries) {
    std::fill(scratch.scores.begin(), scratch.scores.end(), 0.0f);
    const SparseVector& doc = fwd[d];
    // Ascending coordinate order per centroid, so each score equals dot(doc, centroid).
    for (std::size_t e = 0; e < doc.size(); ++e) {
      const float w = doc.weights()[e];
      for (std::uint32_t s = scratch.head[doc.ids()[e]]; s != ClusterScratch::npos;
           s = scratch.next[s]) {
        scratch.scores[scratch.postings[s].first] += w * scratch.postings[s].second;
      }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < beta; ++c) {
      if (scratch.scores[c] > scratch.scores[best]) {
        best = c;
      }
    }
    groups[best].push_back(d);
  }
  for (TermId term : scratch.touched) {
    scratch.head[term] = ClusterScratch::npos;
  }

  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

}  // namespace

void BuildParams::validate() const {
  if (lambda == 0) {
    throw std::invalid_argument("lambda must be positive");
  }
  if (beta == 0) {
    throw std::invalid_argument("beta must be positive");
  }
  if (beta > lambda) {
    throw std::invalid_argument("beta must not exceed lambda");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in (0,1]");
  }
}

InvertedIndex::InvertedIndex(BuildParams params, std::vector<TermId> terms,
                             std::vector<PostingList> lists)
    : params_(params), terms_(std::move(terms)), lists_(std::move(lists)) {
  if (terms_.size() != lists_.size()) {
    throw std::invalid_argument("terms and lists differ in length");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && terms_[i] <= terms_[i - 1]) {
      throw std::invalid_argument("list terms must be strictly increasing");
    }
    if (lists_[i].empty()) {
      throw std::invalid_argument("empty posting list for term " + std::to_string(terms_[i]));
    }
  }
}

const PostingList* InvertedIndex::list(TermId term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) {
    return nullptr;
  }
  return &lists_[static_cast<std::size_t>(it - terms_.begin())];
}

std::size_t InvertedIndex::num_blocks() const {
  std::size_t total = 0;
  for (const auto& l : lists_) {
    total += l.size();
  }
  return total;
}

std::size_t InvertedIndex::num_postings() const {
  std::size_t total = 0;
  for (const auto& l : lists_) {
    for (const auto& b : l) {
      total += b.docs.size();
    }
  }
  return total;
}

std::size_t InvertedIndex::num_summary_entries() const {
  std::size_t total = 0;
  for (const auto& l : lists_) {
    for (const auto& b : l) {
      total += b.summary.size();
    }
  }
  return total;
}

std::size_t blocks_for_list(std::size_t entries, const BuildParams& params) {
  if (entries == 0) {
    return 0;
  }
  // ceil(beta * entries / lambda) without overflow for realistic sizes
  const std::size_t scaled = (params.beta * entries + params.lambda - 1) / params.lambda;
  return std::clamp<std::size_t>(scaled, 1, params.beta);
}

std::vector<std::vector<DocId>> cluster_list(std::span<const DocId> entries,
                                             const ForwardIndex& fwd, std::size_t beta,
                                             std::uint64_t seed) {
  if (beta == 0) {
    throw std::invalid_argument("beta must be positive");
  }
  ClusterScratch scratch;
  return cluster_with(entries, fwd, beta, seed, scratch);
}

namespace {

// Dense max accumulator reused across blocks of one worker.
struct SummaryScratch {
  std::vector<float> maxima;
  std::vector<std::uint32_t> hits;  // members carrying the coordinate
  std::vector<TermId> touched;
};

SparseVector summarize_with(std::span<const DocId> group, const ForwardIndex& fwd, double alpha,
                            SummaryScratch& scratch) {
  if (scratch.maxima.size() < fwd.extent()) {
    scratch.maxima.assign(fwd.extent(), 0.0f);
    scratch.hits.assign(fwd.extent(), 0);
  }
  scratch.touched.clear();
  for (DocId d : group) {
    const SparseVector& v = fwd[d];
    for (std::size_t e = 0; e < v.size(); ++e) {
      const TermId t = v.ids()[e];
      if (scratch.hits[t]++ == 0) {
        scratch.touched.push_back(t);
        scratch.maxima[t] = v.weights()[e];
      } else {
        scratch.maxima[t] = std::max(scratch.maxima[t], v.weights()[e]);
      }
    }
  }
  std::sort(scratch.touched.begin(), scratch.touched.end());

  // Coordinate-wise max; a coordinate missing from some member is 0 there.
  std::vector<std::pair<TermId, float>> maxima;
  maxima.reserve(scratch.touched.size());
  for (TermId t : scratch.touched) {
    float m = scratch.maxima[t];
    if (scratch.hits[t] < group.size()) {
      m = std::max(m, 0.0f);
    }
    if (m != 0.0f) {
      maxima.emplace_back(t, m);
    }
    scratch.hits[t] = 0;
    scratch.maxima[t] = 0.0f;
  }

  if (alpha < 1.0) {
    std::vector<std::pair<TermId, float>> by_weight(maxima);
    std::sort(by_weight.begin(), by_weight.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    double total = 0.0;
    for (const auto& e : by_weight) {
      total += e.second;
    }
    const double target = alpha * total;
    double mass = 0.0;
    std::size_t keep = by_weight.size();
    for (std::size_t i = 0; i < by_weight.size(); ++i) {
      mass += by_weight[i].second;
      if (mass >= target) {
        keep = i + 1;
        break;
      }
    }
    by_weight.resize(keep);
    std::sort(by_weight.begin(), by_weight.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    maxima = std::move(by_weight);
  }

  std::vector<TermId> ids;
  std::vector<float> weights;
  ids.reserve(maxima.size());
  weights.reserve(maxima.size());
  for (const auto& [id, w] : maxima) {
    ids.push_back(id);
    weights.push_back(w);
  }
  return SparseVector(std::move(ids), std::move(weights));
}

}  // namespace

SparseVector summarize(std::span<const DocId> group, const ForwardIndex& fwd, double alpha) {
  if (group.empty()) {
    throw std::invalid_argument("cannot summarize an empty group");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in (0,1]");
  }
  SummaryScratch scratch;
  return summarize_with(group, fwd, alpha, scratch);
}

std::vector<DocId> select_top_postings(std::vector<std::pair<DocId, float>> postings,
                                       std::size_t lambda) {
  auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  };
  const std::size_t keep = std::min(lambda, postings.size());
  std::partial_sort(postings.begin(), postings.begin() + static_cast<std::ptrdiff_t>(keep),
                    postings.end(), better);
  std::vector<DocId> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back(postings[i].first);
  }
  return out;
}

InvertedIndex build_inverted(const ForwardIndex& fwd, const BuildParams& params,
                             std::size_t threads) {
  params.validate();
  if (fwd.empty()) {
    throw std::invalid_argument("cannot build an inverted index over an empty collection");
  }

  const detail::FullPostings full(fwd);
  const std::size_t dim = full.dim();
  std::vector<PostingList> lists(dim);
  const std::size_t workers = resolve_threads(threads);
  std::vector<ClusterScratch> scratch(workers);
  std::vector<SummaryScratch> summary_scratch(workers);
  parallel_for(dim, workers, [&](std::size_t worker, std::size_t term) {
    const auto source = full.list(term);
    if (source.empty()) {
      return;
    }
    std::vector<std::pair<DocId, float>> postings(source.begin(), source.end());
    const auto kept = select_top_postings(std::move(postings), params.lambda);
    const std::size_t nblocks = blocks_for_list(kept.size(), params);
    auto groups = cluster_with(kept, fwd, nblocks, list_seed(params.seed, static_cast<TermId>(term)),
                               scratch[worker]);
    PostingList& list = lists[term];
    list.reserve(groups.size());
    for (auto& g : groups) {
      SparseVector summary = summarize_with(g, fwd, params.alpha, summary_scratch[worker]);
      list.push_back(PostingBlock{std::move(g), std::move(summary)});
    }
  });

  std::vector<TermId> terms;
  std::vector<PostingList> kept_lists;
  for (std::size_t term = 0; term < dim; ++term) {
    if (!lists[term].empty()) {
      terms.push_back(static_cast<TermId>(term));
      kept_lists.push_back(std::move(lists[term]));
    }
  }
  return InvertedIndex(params, std::move(terms), std::move(kept_lists));
}

}  // namespace seismicwave
