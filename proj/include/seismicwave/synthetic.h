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
#include <vector>

#include "seismicwave/sparse_vector.h"

namespace seismicwave {

/// Topic-mixture generator for learned-sparse-like embeddings: a Zipf-skewed
/// vocabulary, documents drawn mostly from one or two topics, positive
/// log-normal weights, and queries drawn from the same topics.
struct SyntheticConfig {
  std::size_t num_docs = 10000;
  std::size_t num_queries = 500;
  std::uint32_t dim = 30000;
  std::size_t doc_nnz = 120;    // mean nonzeros per document
  std::size_t query_nnz = 40;   // mean nonzeros per query
  std::size_t num_topics = 200;
  std::size_t topic_terms = 400;
  double topic_fraction = 0.7;  // share of terms drawn from the doc's topics
  double zipf_exponent = 1.0;
  std::uint64_t seed = 42;
};

struct SyntheticData {
  std::vector<SparseVector> docs;
  std::vector<SparseVector> queries;
};

SyntheticData generate_synthetic(const SyntheticConfig& config);

}  // namespace seismicwave
