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

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "seismicwave/scored_heap.h"
#include "seismicwave/sparse_vector.h"

namespace seismicwave::testing {

/// Random sparse vector with `nnz` distinct ids below `dim`. Weights are
/// drawn from [0.05, 2) unless `allow_negative`, then from (-2, 2).
inline SparseVector random_vector(std::mt19937_64& rng, std::uint32_t dim, std::size_t nnz,
                                  bool allow_negative = false) {
  std::uniform_int_distribution<std::uint32_t> term(0, dim - 1);
  std::uniform_real_distribution<float> weight(allow_negative ? -2.0f : 0.05f, 2.0f);
  std::vector<std::pair<TermId, float>> entries;
  std::vector<bool> used(dim, false);
  nnz = std::min<std::size_t>(nnz, dim);
  while (entries.size() < nnz) {
    const TermId t = term(rng);
    if (used[t]) {
      continue;
    }
    float w = weight(rng);
    if (w == 0.0f) {
      continue;
    }
    used[t] = true;
    entries.emplace_back(t, w);
  }
  return SparseVector::from_unsorted(std::move(entries));
}

inline std::vector<SparseVector> random_corpus(std::uint64_t seed, std::size_t n,
                                               std::uint32_t dim, std::size_t min_nnz,
                                               std::size_t max_nnz) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(min_nnz, max_nnz);
  std::vector<SparseVector> docs;
  docs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    docs.push_back(random_vector(rng, dim, len(rng)));
  }
  return docs;
}

/// Independent brute force: full score list, sorted, truncated.
inline std::vector<ScoredDoc> naive_topk(const SparseVector& q, const std::vector<SparseVector>& docs,
                                         std::size_t k) {
  std::vector<ScoredDoc> all;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    float s = 0.0f;
    // ascending id merge, same accumulation order as dot()
    std::size_t i = 0;
    std::size_t j = 0;
    const auto qi = q.ids();
    const auto di = docs[d].ids();
    while (i < qi.size() && j < di.size()) {
      if (qi[i] == di[j]) {
        s += q.weights()[i] * docs[d].weights()[j];
        ++i;
        ++j;
      } else if (qi[i] < di[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    all.push_back({static_cast<DocId>(d), s});
  }
  std::sort(all.begin(), all.end(), ranks_before);
  all.resize(std::min(k, all.size()));
  return all;
}

inline std::vector<DocId> ids_of(const std::vector<ScoredDoc>& rows) {
  std::vector<DocId> out;
  for (const auto& r : rows) {
    out.push_back(r.doc);
  }
  return out;
}

/// One to four random edits: bit flips, byte overwrites, truncation,
/// insertions, erased spans, or an 8-byte field forced to a huge value.
inline std::string mutate_bytes(const std::string& base, std::mt19937_64& rng) {
  std::string s = base;
  const int edits = 1 + static_cast<int>(rng() % 4);
  for (int e = 0; e < edits; ++e) {
    if (s.empty()) {
      s.push_back(static_cast<char>(rng()));
      continue;
    }
    const std::size_t pos = rng() % s.size();
    switch (rng() % 6) {
      case 0:  // bit flip
        s[pos] = static_cast<char>(s[pos] ^ (1u << (rng() % 8)));
        break;
      case 1:  // random byte
        s[pos] = static_cast<char>(rng());
        break;
      case 2:  // truncate
        s.resize(pos);
        break;
      case 3:  // insert garbage
        s.insert(pos, 1 + rng() % 8, static_cast<char>(rng()));
        break;
      case 4: {  // huge little-endian word
        const std::size_t at = pos & ~std::size_t{7};
        for (std::size_t i = at; i < std::min(s.size(), at + 8); ++i) {
          s[i] = static_cast<char>(i + 1 == at + 8 ? 0x7f : 0xff);
        }
        break;
      }
      default:  // erase a span
        s.erase(pos, 1 + rng() % 16);
        break;
    }
  }
  return s;
}

}  // namespace seismicwave::testing
