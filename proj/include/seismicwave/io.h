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

// Binary file formats. Every integer and float is little-endian.
//
// CSR matrix:
//   u64 nrows, u64 ncols, u64 nnz
//   u64 indptr[nrows + 1]
//   u32 indices[nnz]          strictly increasing within a row, < ncols
//   f32 values[nnz]           finite and nonzero
//
// Ground truth / result rows:
//   u64 nqueries, u64 k
//   per query: u32 ids[k], f32 scores[k]
//
// Index container (SWIX):
//   "SWIX", u32 version
//   u64 lambda, u64 beta, f64 alpha, u64 seed
//   forward index as a CSR matrix (layout above)
//   u64 nlists
//   per list, ascending term: u32 term, u32 nblocks
//     per block: u32 ndocs, u32 docs[ndocs], u32 nnz, u32 ids[nnz], f32 weights[nnz]

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "seismicwave/format_error.h"
#include "seismicwave/forward_index.h"
#include "seismicwave/ground_truth.h"
#include "seismicwave/inverted_index.h"
#include "seismicwave/sparse_vector.h"

namespace seismicwave {

struct SparseCollection {
  std::uint64_t ncols = 0;
  std::vector<SparseVector> rows;

  bool operator==(const SparseCollection&) const = default;
};

SparseCollection read_csr(std::istream& in);
SparseCollection read_csr(const std::filesystem::path& path);

/// `ncols` = 0 derives the column count from the largest id.
void write_csr(std::span<const SparseVector> rows, std::uint64_t ncols, std::ostream& out);
void write_csr(std::span<const SparseVector> rows, std::uint64_t ncols,
               const std::filesystem::path& path);

void write_ground_truth(const GroundTruth& truth, std::ostream& out);
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
GroundTruth read_ground_truth(std::istream& in);
GroundTruth read_ground_truth(const std::filesystem::path& path);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

struct StoredIndex {
  ForwardIndex forward;
  InvertedIndex inverted;
};

void index_write(const InvertedIndex& index, const ForwardIndex& fwd, std::ostream& out);
void index_write(const InvertedIndex& index, const ForwardIndex& fwd,
                 const std::filesystem::path& path);
StoredIndex index_read(std::istream& in);
StoredIndex index_read(const std::filesystem::path& path);

/// Byte sizes of the SWIX sections. total = header + forward + inverted and
/// equals the length of the file index_write produces.
struct IndexSizes {
  std::uint64_t forward = 0;
  std::uint64_t inverted = 0;
  std::uint64_t total = 0;
};

IndexSizes index_size_bytes(const InvertedIndex& index, const ForwardIndex& fwd);

/// Memory budget rule: inverted index plus graph must not exceed
/// `multiplier` times the forward index.
bool within_budget(const IndexSizes& sizes, std::uint64_t graph_bytes, double multiplier);

}  // namespace seismicwave
