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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "seismicwave/inverted_index.h"
#include "seismicwave/search.h"
#include "test_util.h"

namespace seismicwave {
namespace {

TEST(SummaryScoresTest, Examples) {
  const SparseVector q{{1, 1.0f}};
  const std::vector<PostingBlock> none = {PostingBlock{{0}, SparseVector{{2, 4.0f}}}};
  EXPECT_EQ(summary_scores(q, none), std::vector<float>{0.0f});
  const std::vector<PostingBlock> two = {PostingBlock{{0}, SparseVector{{1, 2.0f}}},
                                         PostingBlock{{1}, SparseVector{{1, 5.0f}}}};
  EXPECT_EQ(summary_scores(q, two), (std::vector<float>{2.0f, 5.0f}));
}

TEST(TraversalOrderTest, Policies) {
  const std::vector<float> s = {1.0f, 3.0f, 2.0f, 3.0f};
  const std::vector<std::size_t> stored = {0, 1, 2, 3};
  const std::vector<std::size_t> sorted = {1, 3, 2, 0};  // ties keep stored order
  EXPECT_EQ(traversal_order(s, Traversal::kArbitrary, 0), stored);
  EXPECT_EQ(traversal_order(s, Traversal::kFirstListOrdered, 0), sorted);
  EXPECT_EQ(traversal_order(s, Traversal::kFirstListOrdered, 1), stored);
  EXPECT_EQ(traversal_order(s, Traversal::kAllListsOrdered, 5), sorted);
}

TEST(TraversalOrderTest, NamesRoundTrip) {
  for (Traversal t : {Traversal::kArbitrary, Traversal::kFirstListOrdered,
                      Traversal::kAllListsOrdered}) {
    EXPECT_EQ(parse_traversal(to_string(t)), t);
  }
  EXPECT_EQ(parse_traversal("sorted"), std::nullopt);
}

TEST(SearchParamsTest, Validation) {
  SearchParams p;
  EXPECT_NO_THROW(p.validate());
  p.k = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SearchParams{};
  p.cut = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SearchParams{};
  p.heap_factor = 0.0f;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.heap_factor = 1.01f;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

struct Fixture {
  std::vector<SparseVector> docs;
  ForwardIndex fwd;
  std::vector<SparseVector> queries;
};

// Small vocabulary so every query shares coordinates with many documents.
Fixture dense_fixture(std::uint64_t seed) {
  Fixture f;
  f.docs = testing::random_corpus(seed, 500, 60, 4, 16);
  f.fwd = build_forward(f.docs);
  std::mt19937_64 rng(seed + 1);
  for (int i = 0; i < 60; ++i) {
    f.queries.push_back(testing::random_vector(rng, 60, 3 + i % 10));
  }
  return f;
}

TEST(SearchSeismicTest, ExactModeEqualsBruteForce) {
  const Fixture f = dense_fixture(21);
  for (std::size_t beta : {1, 7, 50}) {
    BuildParams bp;
    bp.lambda = f.fwd.size();
    bp.beta = beta;
    bp.alpha = 1.0;
    const auto idx = build_inverted(f.fwd, bp);
    for (Traversal t : {Traversal::kArbitrary, Traversal::kFirstListOrdered,
                        Traversal::kAllListsOrdered}) {
      for (std::size_t k : {1, 10, 40}) {
        SearchParams p;
        p.k = k;
        p.cut = 100;
        p.heap_factor = 1.0f;
        p.obt = t;
        for (const auto& q : f.queries) {
          const auto got = search_seismic(q, idx, f.fwd, p).results;
          const auto want = testing::naive_topk(q, f.docs, k);
          ASSERT_EQ(got, want) << "beta " << beta << " k " << k;
        }
      }
    }
  }
}

TEST(SearchSeismicTest, GateDecisionsMatchStats) {
  const Fixture f = dense_fixture(22);
  BuildParams bp;
  bp.lambda = 100;
  bp.beta = 10;
  bp.alpha = 0.5;
  const auto idx = build_inverted(f.fwd, bp);
  SearchParams p;
  p.k = 10;
  p.cut = 5;
  p.heap_factor = 0.8f;
  for (const auto& q : f.queries) {
    std::uint64_t evaluated = 0;
    std::uint64_t probes = 0;
    SearchOptions opts;
    opts.observer = [&](const BlockProbe& probe) {
      ++probes;
      EXPECT_EQ(probe.evaluated, p.heap_factor * probe.summary_score > probe.threshold);
      EXPECT_EQ(probe.summary_score, dot(q, probe.posting_block->summary));
      evaluated += probe.evaluated ? 1 : 0;
    };
    const auto r = search_seismic(q, idx, f.fwd, p, opts);
    EXPECT_EQ(r.stats.blocks_evaluated, evaluated);
    EXPECT_EQ(r.stats.blocks_scored, probes);
    EXPECT_EQ(r.stats.lists_visited, std::min<std::size_t>(p.cut, q.size()));
    EXPECT_TRUE(std::is_sorted(r.results.begin(), r.results.end(), ranks_before));
  }
}

TEST(SearchSeismicTest, HeapMinimumNonDecreasingInCut) {
  const Fixture f = dense_fixture(23);
  BuildParams bp;
  bp.lambda = 40;
  bp.beta = 8;
  bp.alpha = 0.4;
  const auto idx = build_inverted(f.fwd, bp);
  Searcher searcher(idx, f.fwd);
  for (const auto& q : f.queries) {
    float prev = -INFINITY;
    std::vector<ScoredDoc> prev_rows;
    for (std::size_t cut = 1; cut <= 14; ++cut) {
      SearchParams p;
      p.k = 10;
      p.cut = cut;
      ScoredHeap heap(p.k);
      searcher.search_into(q, p, heap);
      ASSERT_GE(heap.min(), prev);
      prev = heap.min();
      // the sorted score vector dominates the previous one elementwise
      const auto rows = heap.sorted();
      ASSERT_GE(rows.size(), prev_rows.size());
      for (std::size_t i = 0; i < prev_rows.size(); ++i) {
        ASSERT_GE(rows[i].score, prev_rows[i].score);
      }
      prev_rows = rows;
    }
  }
}

TEST(SearchSeismicTest, DeterministicAcrossRuns) {
  const Fixture f = dense_fixture(24);
  BuildParams bp;
  bp.lambda = 50;
  bp.beta = 5;
  const auto idx = build_inverted(f.fwd, bp);
  SearchParams p;
  p.heap_factor = 0.7f;
  p.obt = Traversal::kAllListsOrdered;
  Searcher searcher(idx, f.fwd);
  for (const auto& q : f.queries) {
    const auto a = searcher.search(q, p);
    const auto b = search_seismic(q, idx, f.fwd, p);
    ASSERT_EQ(a.results, b.results);
    ASSERT_EQ(a.stats.docs_scored, b.stats.docs_scored);
    ASSERT_EQ(a.stats.blocks_evaluated, b.stats.blocks_evaluated);
  }
}

TEST(SearchSeismicTest, TimingRecordsEveryVisitedList) {
  const Fixture f = dense_fixture(25);
  BuildParams bp;
  bp.lambda = 50;
  bp.beta = 5;
  const auto idx = build_inverted(f.fwd, bp);
  SearchParams p;
  p.cut = 4;
  SearchOptions opts;
  opts.time_lists = true;
  const auto r = search_seismic(f.queries[5], idx, f.fwd, p, opts);
  EXPECT_EQ(r.stats.per_list_nanos.size(), std::min<std::size_t>(4, f.queries[5].size()));
  EXPECT_TRUE(search_seismic(f.queries[5], idx, f.fwd, p).stats.per_list_nanos.empty());
}

TEST(SearchSeismicTest, QueryWithNoPostings) {
  const ForwardIndex fwd = build_forward({SparseVector{{1, 1.0f}}, SparseVector{{2, 1.0f}}});
  BuildParams bp;
  bp.lambda = 2;
  bp.beta = 1;
  const auto idx = build_inverted(fwd, bp);
  const auto r = search_seismic(SparseVector{{7, 1.0f}}, idx, fwd, SearchParams{});
  EXPECT_TRUE(r.results.empty());
  EXPECT_EQ(r.stats.lists_visited, 1u);
}

}  // namespace
}  // namespace seismicwave
