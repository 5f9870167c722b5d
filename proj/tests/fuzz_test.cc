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


// Mutation fuzzing of every binary reader: a damaged file must either parse
// or raise FormatError, never anything else.

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <sstream>

#include "seismicwave/eval.h"
#include "seismicwave/io.h"
#include "seismicwave/knn_graph.h"
#include "test_util.h"

namespace seismicwave {
namespace {

constexpr int kMutantsPerFormat = 2500;

void fuzz(const std::string& base, const std::function<void(std::istream&)>& read,
          std::uint64_t seed) {
  {
    std::istringstream in(base);
    ASSERT_NO_THROW(read(in)) << "unmutated input must parse";
  }
  std::mt19937_64 rng(seed);
  int rejected = 0;
  for (int i = 0; i < kMutantsPerFormat; ++i) {
    std::istringstream in(testing::mutate_bytes(base, rng));
    try {
      read(in);
    } catch (const FormatError&) {
      ++rejected;
    } catch (const std::exception& e) {
      FAIL() << "mutant " << i << " raised non-format error: " << e.what();
    }
  }
  EXPECT_GT(rejected, kMutantsPerFormat / 2);
}

std::vector<SparseVector> corpus() { return testing::random_corpus(77, 40, 50, 1, 6); }

TEST(FuzzTest, Csr) {
  std::ostringstream out;
  const auto docs = corpus();
  write_csr(docs, 0, out);
  fuzz(out.str(), [](std::istream& in) { read_csr(in); }, 1);
}

TEST(FuzzTest, GroundTruth) {
  const ForwardIndex fwd = build_forward(corpus());
  const auto docs = corpus();
  const std::vector<SparseVector> queries(docs.begin(), docs.begin() + 8);
  std::ostringstream out;
  write_ground_truth(compute_ground_truth(queries, fwd, 5), out);
  fuzz(out.str(), [](std::istream& in) { read_ground_truth(in); }, 2);
}

TEST(FuzzTest, Graph) {
  const ForwardIndex fwd = build_forward(corpus());
  std::ostringstream out;
  graph_write(build_knn_exact(fwd, 4), out);
  fuzz(out.str(), [](std::istream& in) { graph_read(in); }, 3);
}

TEST(FuzzTest, Index) {
  const ForwardIndex fwd = build_forward(corpus());
  BuildParams bp;
  bp.lambda = 10;
  bp.beta = 3;
  bp.alpha = 0.6;
  std::ostringstream out;
  index_write(build_inverted(fwd, bp), fwd, out);
  fuzz(out.str(), [](std::istream& in) { index_read(in); }, 4);
}

}  // namespace
}  // namespace seismicwave
