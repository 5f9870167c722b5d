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

#include <cmath>
#include <limits>
#include <random>

#include "seismicwave/forward_index.h"
#include "seismicwave/sparse_vector.h"
#include "test_util.h"

namespace seismicwave {
namespace {

TEST(SparseVectorTest, DotOverSharedSupport) {
  const SparseVector u{{1, 2.0f}, {3, 1.0f}};
  const SparseVector v{{1, 0.5f}, {2, 4.0f}, {3, 3.0f}};
  EXPECT_FLOAT_EQ(dot(u, v), 4.0f);
  EXPECT_FLOAT_EQ(dot(v, u), 4.0f);
}

TEST(SparseVectorTest, DisjointAndEmpty) {
  const SparseVector u{{1, 2.0f}};
  const SparseVector v{{2, 3.0f}};
  EXPECT_EQ(dot(u, v), 0.0f);
  EXPECT_EQ(dot(SparseVector{}, v), 0.0f);
  EXPECT_TRUE(SparseVector{}.empty());
}

TEST(SparseVectorTest, RejectsBrokenInvariants) {
  EXPECT_THROW((SparseVector{{3, 1.0f}, {1, 1.0f}}), std::invalid_argument);
  EXPECT_THROW((SparseVector{{1, 1.0f}, {1, 2.0f}}), std::invalid_argument);
  EXPECT_THROW((SparseVector{{1, 0.0f}}), std::invalid_argument);
  EXPECT_THROW((SparseVector{{1, std::numeric_limits<float>::quiet_NaN()}}),
               std::invalid_argument);
  EXPECT_THROW((SparseVector{{1, std::numeric_limits<float>::infinity()}}),
               std::invalid_argument);
  EXPECT_THROW(SparseVector({1, 2}, {1.0f}), std::invalid_argument);
  EXPECT_TRUE(SparseVector::check(std::vector<TermId>{1, 2}, std::vector<float>{1, 2}) ==
              std::nullopt);
}

TEST(SparseVectorTest, FromUnsortedSortsAndDropsZeros) {
  const auto v = SparseVector::from_unsorted({{9, 1.0f}, {2, 0.0f}, {4, -2.0f}});
  EXPECT_EQ(v, (SparseVector{{4, -2.0f}, {9, 1.0f}}));
  EXPECT_THROW(SparseVector::from_unsorted({{1, 1.0f}, {1, 2.0f}}), std::invalid_argument);
}

TEST(SparseVectorTest, AtReturnsZeroWhenAbsent) {
  const SparseVector v{{1, 2.0f}, {7, 3.0f}};
  EXPECT_EQ(v.at(7), 3.0f);
  EXPECT_EQ(v.at(5), 0.0f);
  EXPECT_EQ(v.at(100), 0.0f);
}

TEST(SparseVectorTest, QueryCoordinatesByWeightThenId) {
  const SparseVector q{{1, 0.5f}, {2, 3.0f}, {5, 0.5f}, {8, 1.0f}};
  EXPECT_EQ(query_coordinates(q), (std::vector<TermId>{2, 8, 1, 5}));
  EXPECT_TRUE(query_coordinates(SparseVector{}).empty());
}

TEST(SparseVectorTest, DenseQueryMatchesMergeDotBitForBit) {
  std::mt19937_64 rng(7);
  DenseQuery dense;
  for (int trial = 0; trial < 2000; ++trial) {
    const bool neg = trial % 3 == 0;
    const auto q = testing::random_vector(rng, 500, 1 + trial % 60, neg);
    const auto v = testing::random_vector(rng, 700, 1 + trial % 90, neg);
    dense.assign(q);
    const float a = dense.dot(v);
    const float b = dot(q, v);
    ASSERT_EQ(std::signbit(a), std::signbit(b));
    ASSERT_EQ(a, b) << "trial " << trial;
  }
}

TEST(SparseVectorTest, DenseQueryReassignClearsOldCoordinates) {
  DenseQuery dense(SparseVector{{3, 5.0f}});
  dense.assign(SparseVector{{4, 1.0f}});
  EXPECT_EQ(dense.dot(SparseVector{{3, 1.0f}}), 0.0f);
  EXPECT_EQ(dense.dot(SparseVector{{4, 2.0f}}), 2.0f);
}

TEST(ForwardIndexTest, EmptyCollection) {
  const ForwardIndex fwd = build_forward({});
  EXPECT_EQ(fwd.size(), 0u);
  EXPECT_TRUE(fwd.empty());
  EXPECT_EQ(fwd.nnz(), 0u);
}

TEST(ForwardIndexTest, IdsFollowInputOrder) {
  const SparseVector v0{{1, 1.0f}};
  const SparseVector v1{{0, 2.0f}, {9, 3.0f}};
  const ForwardIndex fwd = build_forward({v0, v1});
  EXPECT_EQ(fwd[0], v0);
  EXPECT_EQ(fwd[1], v1);
  EXPECT_EQ(fwd.nnz(), 3u);
  EXPECT_EQ(fwd.extent(), 10u);
  EXPECT_EQ(fwd.dim(), 10u);
  EXPECT_EQ(ForwardIndex({v0, v1}, 50).dim(), 50u);
}

TEST(ForwardIndexTest, TenThousandVectorsRoundTrip) {
  const auto docs = testing::random_corpus(3, 10000, 30000, 1, 40);
  const ForwardIndex fwd = build_forward(docs);
  ASSERT_EQ(fwd.size(), 10000u);
  for (DocId i = 0; i < fwd.size(); ++i) {
    ASSERT_EQ(fwd[i], docs[i]);
  }
}

}  // namespace
}  // namespace seismicwave
