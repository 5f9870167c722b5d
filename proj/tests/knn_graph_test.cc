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
#include <set>
#include <sstream>

#include "seismicwave/inverted_index.h"
#include "seismicwave/knn_graph.h"
#include "seismicwave/synthetic.h"
#include "test_util.h"

namespace seismicwave {
namespace {

// Independent double loop: all pairwise products, full sort per node.
std::vector<DocId> double_loop_knn(const std::vector<SparseVector>& docs, std::size_t kappa) {
  std::vector<DocId> table;
  for (std::size_t u = 0; u < docs.size(); ++u) {
    std::vector<ScoredDoc> row;
    for (std::size_t v = 0; v < docs.size(); ++v) {
      if (u != v) {
        row.push_back({static_cast<DocId>(v), dot(docs[u], docs[v])});
      }
    }
    std::sort(row.begin(), row.end(), ranks_before);
    for (std::size_t i = 0; i < kappa; ++i) {
      table.push_back(row[i].doc);
    }
  }
  return table;
}

TEST(KnnGraphTest, ConstructorEnforcesInvariants) {
  EXPECT_NO_THROW(KnnGraph(3, 1, {1, 0, 0}));
  EXPECT_THROW(KnnGraph(3, 1, {0, 0, 0}), std::invalid_argument);      // self loop
  EXPECT_THROW(KnnGraph(3, 1, {1, 0, 3}), std::invalid_argument);      // out of range
  EXPECT_THROW(KnnGraph(3, 2, {1, 1, 0, 2, 0, 1}), std::invalid_argument);  // duplicate
  EXPECT_THROW(KnnGraph(3, 1, {1, 0}), std::invalid_argument);         // wrong length
  EXPECT_THROW(KnnGraph(2, 2, {1, 1, 0, 0}), std::invalid_argument);   // kappa >= n
}

TEST(KnnGraphTest, TruncateKeepsPrefix) {
  const KnnGraph g(4, 2, {1, 2, 0, 3, 3, 1, 2, 0});
  const KnnGraph t = g.truncated(1);
  EXPECT_EQ(t.kappa(), 1u);
  EXPECT_EQ(std::vector<DocId>(t.table().begin(), t.table().end()),
            (std::vector<DocId>{1, 0, 3, 2}));
  EXPECT_THROW(g.truncated(3), std::invalid_argument);
}

TEST(BuildKnnExactTest, OrthogonalDocsTieToLowestId) {
  const ForwardIndex fwd = build_forward(
      {SparseVector{{0, 1.0f}}, SparseVector{{1, 1.0f}}, SparseVector{{2, 1.0f}}});
  const KnnGraph g = build_knn_exact(fwd, 1);
  EXPECT_EQ(std::vector<DocId>(g.table().begin(), g.table().end()),
            (std::vector<DocId>{1, 0, 0}));
}

TEST(BuildKnnExactTest, ScaledCopyIsNearest) {
  const ForwardIndex fwd = build_forward({
      SparseVector{{0, 1.0f}},
      SparseVector{{3, 1.0f}, {4, 1.0f}},                // b
      SparseVector{{3, 2.0f}, {4, 2.0f}},                // a = 2b
      SparseVector{{9, 5.0f}},
  });
  EXPECT_EQ(build_knn_exact(fwd, 2).neighbors(1)[0], 2u);
}

TEST(BuildKnnExactTest, RejectsKappaNotBelowN) {
  const ForwardIndex fwd = build_forward({SparseVector{{0, 1.0f}}, SparseVector{{1, 1.0f}}});
  EXPECT_THROW(build_knn_exact(fwd, 2), std::invalid_argument);
  EXPECT_THROW(build_knn_exact(fwd, 0), std::invalid_argument);
  EXPECT_THROW(build_knn_approx(fwd, 2), std::invalid_argument);
}

TEST(BuildKnnExactTest, MatchesDoubleLoopOracle) {
  const auto docs = testing::random_corpus(31, 1000, 400, 3, 25);
  const ForwardIndex fwd = build_forward(docs);
  const KnnGraph g = build_knn_exact(fwd, 10);
  const auto oracle = double_loop_knn(docs, 10);
  EXPECT_EQ(std::vector<DocId>(g.table().begin(), g.table().end()), oracle);
  EXPECT_EQ(build_knn_exact(fwd, 10, 1), g);
}

TEST(BuildKnnExactTest, RowsSortedByScoreThenId) {
  const auto docs = testing::random_corpus(32, 300, 50, 2, 8);
  const ForwardIndex fwd = build_forward(docs);
  const KnnGraph g = build_knn_exact(fwd, 12);
  for (DocId u = 0; u < g.n(); ++u) {
    std::vector<ScoredDoc> row;
    for (DocId v : g.neighbors(u)) {
      row.push_back({v, dot(fwd[u], fwd[v])});
    }
    ASSERT_TRUE(std::is_sorted(row.begin(), row.end(), ranks_before));
  }
}

TEST(BuildKnnApproxTest, ExactOverridesReproduceExactGraph) {
  const auto docs = testing::random_corpus(33, 400, 120, 3, 15);
  const ForwardIndex fwd = build_forward(docs);
  ApproxGraphParams p;
  p.lambda = fwd.size();
  p.beta = 20;
  p.alpha = 1.0;
  p.cut = 1000;
  p.heap_factor = 1.0f;
  EXPECT_EQ(build_knn_approx(fwd, 8, p), build_knn_exact(fwd, 8));
}

TEST(BuildKnnApproxTest, DefaultsGiveValidGraphWithHighOverlap) {
  // topical data like the corpora the defaults target; far below this size the
  // capped lambda/beta leave singleton blocks and quality drops
  SyntheticConfig cfg;
  cfg.num_docs = 5000;
  cfg.num_queries = 1;
  cfg.seed = 34;
  const ForwardIndex fwd = build_forward(generate_synthetic(cfg).docs);
  const KnnGraph approx = build_knn_approx(fwd, 10);
  const KnnGraph exact = build_knn_exact(fwd, 10);
  EXPECT_EQ(approx.n(), 5000u);
  EXPECT_GE(neighbor_overlap(approx, exact), 0.95);
  EXPECT_DOUBLE_EQ(neighbor_overlap(exact, exact), 1.0);
}

TEST(BuildKnnApproxTest, PadsWhenIndexReturnsTooFew) {
  // disjoint supports: the index finds nobody, padding fills from a scan
  std::vector<SparseVector> docs;
  for (TermId t = 0; t < 6; ++t) {
    docs.push_back(SparseVector{{t, 1.0f}});
  }
  const ForwardIndex fwd = build_forward(docs);
  EXPECT_EQ(build_knn_approx(fwd, 3), build_knn_exact(fwd, 3));
}

TEST(RefineTest, SingleDisplacement) {
  // u = 0, v = 1; dot(q, fwd[v]) = 9
  const ForwardIndex fwd = build_forward({SparseVector{{0, 5.0f}}, SparseVector{{1, 9.0f}}});
  const KnnGraph g(2, 1, {1, 0});
  ScoredHeap heap(1);
  heap.insert(5.0f, 0);
  const SparseVector q{{0, 1.0f}, {1, 1.0f}};
  const RefineStats s = refine_with_knn(q, heap, g, fwd);
  EXPECT_EQ(heap.sorted(), (std::vector<ScoredDoc>{{1, 9.0f}}));
  EXPECT_EQ(s.docs_scored, 1u);
  EXPECT_EQ(s.inserted, 1u);
}

TEST(RefineTest, ExactTopKIsFixedPoint) {
  const auto docs = testing::random_corpus(35, 300, 80, 3, 12);
  const ForwardIndex fwd = build_forward(docs);
  const KnnGraph g = build_knn_exact(fwd, 5);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    const auto q = testing::random_vector(rng, 80, 8);
    ScoredHeap heap(10);
    for (const auto& e : testing::naive_topk(q, docs, 10)) {
      heap.insert(e.score, e.doc);
    }
    const auto before = heap.sorted();
    const RefineStats s = refine_with_knn(q, heap, g, fwd);
    EXPECT_EQ(heap.sorted(), before);
    EXPECT_EQ(s.inserted, 0u);
    // a second pass over an unchanged heap changes nothing either
    refine_with_knn(q, heap, g, fwd);
    EXPECT_EQ(heap.sorted(), before);
  }
}

TEST(RefineTest, MonotoneAndRecoversOneHopNeighbors) {
  const auto docs = testing::random_corpus(36, 500, 100, 3, 12);
  const ForwardIndex fwd = build_forward(docs);
  BuildParams bp;
  bp.lambda = 20;
  bp.beta = 4;
  bp.alpha = 0.4;
  const auto idx = build_inverted(fwd, bp);
  const KnnGraph g = build_knn_exact(fwd, 10);
  Searcher searcher(idx, fwd);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto q = testing::random_vector(rng, 100, 10);
    SearchParams p;
    p.k = 10;
    p.cut = 3;
    p.heap_factor = 0.8f;
    ScoredHeap heap(p.k);
    searcher.search_into(q, p, heap);
    const auto before = heap.sorted();
    const float min_before = heap.min();
    const RefineStats s = refine_with_knn(q, heap, g, fwd);
    const auto after = heap.sorted();
    ASSERT_GE(heap.min(), min_before);
    ASSERT_GE(after.size(), before.size());
    for (std::size_t j = 0; j < before.size(); ++j) {
      ASSERT_GE(after[j].score, before[j].score);
    }
    // anything new in the heap is a one-hop neighbor of the base set
    std::set<DocId> base;
    for (const auto& e : before) {
      base.insert(e.doc);
    }
    std::set<DocId> expanded;
    for (DocId u : base) {
      for (DocId v : g.neighbors(u)) {
        if (!base.contains(v)) {
          expanded.insert(v);
        }
      }
    }
    for (const auto& e : after) {
      ASSERT_TRUE(base.contains(e.doc) || expanded.contains(e.doc));
    }
    ASSERT_GE(s.docs_scored, s.inserted);
  }
}

TEST(RefineTest, SearchWaveNeedsGraphWhenExpanding) {
  const ForwardIndex fwd = build_forward({SparseVector{{0, 1.0f}}, SparseVector{{0, 2.0f}}});
  BuildParams bp;
  bp.lambda = 2;
  bp.beta = 1;
  const auto idx = build_inverted(fwd, bp);
  Searcher searcher(idx, fwd);
  SearchParams p;
  p.expand = true;
  EXPECT_THROW(search_wave(searcher, nullptr, SparseVector{{0, 1.0f}}, p),
               std::invalid_argument);
  p.expand = false;
  EXPECT_EQ(search_wave(searcher, nullptr, SparseVector{{0, 1.0f}}, p).results.size(), 2u);
}

TEST(GraphFormatTest, TwoNodeFileIs25Bytes) {
  const KnnGraph g(2, 1, {1, 0});
  std::ostringstream out;
  graph_write(g, out);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 25u);
  EXPECT_EQ(bytes.substr(0, 4), "SWKG");
  EXPECT_EQ(static_cast<unsigned char>(bytes[24]), 0b01u);  // node 0 -> 1, node 1 -> 0
  EXPECT_EQ(bits_per_id(2), 1u);
  EXPECT_EQ(graph_file_bytes(2, 1), 25u);
}

TEST(GraphFormatTest, PayloadFormula) {
  EXPECT_EQ(bits_per_id(1000000), 20u);
  EXPECT_EQ(graph_payload_bytes(1000000, 20), 50000000u);
  for (std::size_t n : {2, 3, 4, 5, 1000, 1024, 1025, 10000}) {
    const auto b = static_cast<std::uint64_t>(std::floor(std::log2(double(n - 1)))) + 1;
    EXPECT_EQ(bits_per_id(n), b) << n;
    for (std::size_t kappa : {1, 10, 20, 50}) {
      EXPECT_EQ(graph_payload_bytes(n, kappa), (b * n * kappa + 7) / 8);
    }
  }
}

TEST(GraphFormatTest, RoundTripRandomGraphs) {
  std::mt19937_64 rng(37);
  for (std::size_t n : {2, 3, 17, 64, 65, 300}) {
    for (std::size_t kappa : {std::size_t{1}, std::min<std::size_t>(n - 1, 7)}) {
      std::vector<DocId> table;
      for (std::size_t u = 0; u < n; ++u) {
        std::vector<DocId> others;
        for (std::size_t v = 0; v < n; ++v) {
          if (v != u) {
            others.push_back(static_cast<DocId>(v));
          }
        }
        std::shuffle(others.begin(), others.end(), rng);
        table.insert(table.end(), others.begin(), others.begin() + kappa);
      }
      const KnnGraph g(n, kappa, table);
      std::stringstream buf;
      graph_write(g, buf);
      ASSERT_EQ(buf.str().size(), graph_file_bytes(n, kappa));
      ASSERT_EQ(graph_read(buf), g);
    }
  }
}

TEST(GraphFormatTest, ReaderRejectsDamage) {
  const KnnGraph g(5, 2, {1, 2, 0, 2, 0, 1, 0, 1, 0, 1});
  std::ostringstream out;
  graph_write(g, out);
  const std::string good = out.str();
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return graph_read(in);
  };
  EXPECT_EQ(read(good), g);
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_THROW(read(bad), FormatError);
  bad = good;
  bad[4] = 2;  // version
  EXPECT_THROW(read(bad), FormatError);
  EXPECT_THROW(read(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(read(good + "x"), FormatError);
  EXPECT_THROW(read(good.substr(0, 10)), FormatError);
  bad = good;
  bad[24] = static_cast<char>(0xff);  // first id becomes 7 >= n
  EXPECT_THROW(read(bad), FormatError);
}

}  // namespace
}  // namespace seismicwave
