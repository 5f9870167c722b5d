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

#include "seismicwave/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "binary_io.h"

namespace seismicwave {

namespace {

using detail::BinaryReader;
using detail::BinaryWriter;

constexpr std::uint64_t kMaxColumns = std::uint64_t{1} << 32;
constexpr std::uint64_t kBatchNnz = std::uint64_t{1} << 20;

std::uint32_t load_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish(std::ostream& out, const char* what) {
  out.flush();
  if (!out) {
    throw std::runtime_error(std::string("failed to write ") + what);
  }
}

std::uint64_t derive_ncols(std::span<const SparseVector> rows, std::uint64_t ncols) {
  std::uint64_t needed = 0;
  for (const auto& r : rows) {
    if (!r.empty()) {
      needed = std::max<std::uint64_t>(needed, std::uint64_t{r.ids().back()} + 1);
    }
  }
  if (ncols == 0) {
    return needed;
  }
  if (ncols < needed) {
    throw std::invalid_argument("ncols smaller than the largest column id");
  }
  return ncols;
}

void write_csr_body(std::span<const SparseVector> rows, std::uint64_t ncols, BinaryWriter& w) {
  std::uint64_t nnz = 0;
  for (const auto& r : rows) {
    nnz += r.size();
  }
  w.u64(rows.size());
  w.u64(derive_ncols(rows, ncols));
  w.u64(nnz);
  std::uint64_t offset = 0;
  w.u64(0);
  for (const auto& r : rows) {
    offset += r.size();
    w.u64(offset);
  }
  for (const auto& r : rows) {
    for (TermId id : r.ids()) {
      w.u32(id);
    }
  }
  for (const auto& r : rows) {
    for (float v : r.weights()) {
      w.f32(v);
    }
  }
}

// Reads header and offsets, then rows in batches of ~kBatchNnz entries by
// seeking between the index and value sections.
SparseCollection read_csr_body(BinaryReader& r) {
  SparseCollection out;
  const std::uint64_t nrows = r.u64("csr header");
  out.ncols = r.u64("csr header");
  const std::uint64_t nnz = r.u64("csr header");
  if (out.ncols > kMaxColumns) {
    r.fail("csr ncols exceeds the 32-bit id space");
  }
  if (nrows >= std::numeric_limits<std::uint32_t>::max()) {
    r.fail("csr nrows exceeds the 32-bit id space");
  }
  r.require(nrows + 1, 8, "csr indptr");
  std::vector<std::uint64_t> indptr(nrows + 1);
  for (std::uint64_t i = 0; i <= nrows; ++i) {
    indptr[i] = r.u64("csr indptr");
    if (i == 0 && indptr[0] != 0) {
      r.fail("csr indptr[0] must be 0");
    }
    if (i > 0 && indptr[i] < indptr[i - 1]) {
      r.fail("csr indptr decreases at row " + std::to_string(i - 1));
    }
  }
  if (indptr[nrows] != nnz) {
    r.fail("csr indptr[nrows] does not match nnz");
  }
  r.require(nnz, 8, "csr indices/values");
  const std::uint64_t indices_base = r.offset();
  const std::uint64_t values_base = indices_base + 4 * nnz;

  out.rows.reserve(nrows);
  std::vector<unsigned char> idx_buf;
  std::vector<unsigned char> val_buf;
  std::uint64_t row = 0;
  while (row < nrows) {
    std::uint64_t end = row + 1;
    while (end < nrows && indptr[end + 1] - indptr[row] <= kBatchNnz) {
      ++end;
    }
    const std::uint64_t first = indptr[row];
    const std::uint64_t count = indptr[end] - first;
    idx_buf.resize(4 * count);
    val_buf.resize(4 * count);
    r.seek(indices_base + 4 * first);
    r.read_bytes(idx_buf.data(), idx_buf.size(), "csr indices");
    r.seek(values_base + 4 * first);
    r.read_bytes(val_buf.data(), val_buf.size(), "csr values");

    for (; row < end; ++row) {
      const std::uint64_t lo = indptr[row] - first;
      const std::uint64_t hi = indptr[row + 1] - first;
      std::vector<TermId> ids(hi - lo);
      std::vector<float> weights(hi - lo);
      for (std::uint64_t e = lo; e < hi; ++e) {
        const std::uint32_t id = load_u32(&idx_buf[4 * e]);
        const float value = std::bit_cast<float>(load_u32(&val_buf[4 * e]));
        const std::uint64_t where = first + e;
        if (id >= out.ncols) {
          throw FormatError("row " + std::to_string(row) + ": column id out of range",
                            indices_base + 4 * where);
        }
        if (e > lo && id <= ids[e - lo - 1]) {
          throw FormatError("row " + std::to_string(row) + ": indices not strictly increasing",
                            indices_base + 4 * where);
        }
        if (!std::isfinite(value)) {
          throw FormatError("row " + std::to_string(row) + ": non-finite value",
                            values_base + 4 * where);
        }
        if (value == 0.0f) {
          throw FormatError("row " + std::to_string(row) + ": explicit zero value",
                            values_base + 4 * where);
        }
        ids[e - lo] = id;
        weights[e - lo] = value;
      }
      out.rows.emplace_back(std::move(ids), std::move(weights));
    }
  }
  r.seek(values_base + 4 * nnz);
  return out;
}

std::uint64_t csr_bytes(const ForwardIndex& fwd) {
  return 24 + 8 * (std::uint64_t{fwd.size()} + 1) + 8 * std::uint64_t{fwd.nnz()};
}

}  // namespace

SparseCollection read_csr(std::istream& in) {
  BinaryReader r(in);
  auto out = read_csr_body(r);
  r.expect_end();
  return out;
}

SparseCollection read_csr(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_csr(in);
}

void write_csr(std::span<const SparseVector> rows, std::uint64_t ncols, std::ostream& out) {
  BinaryWriter w(out);
  write_csr_body(rows, ncols, w);
  finish(out, "csr matrix");
}

void write_csr(std::span<const SparseVector> rows, std::uint64_t ncols,
               const std::filesystem::path& path) {
  auto out = open_out(path);
  write_csr(rows, ncols, out);
}

std::vector<ScoredDoc> pad_row(std::vector<ScoredDoc> row, std::size_t k) {
  if (row.size() > k) {
    throw std::invalid_argument("result row longer than k");
  }
  row.resize(k, ScoredDoc{kNoDoc, -std::numeric_limits<float>::infinity()});
  return row;
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
  BinaryWriter w(out);
  w.u64(truth.queries.size());
  w.u64(truth.k);
  for (const auto& row : truth.queries) {
    if (row.size() != truth.k) {
      throw std::invalid_argument("every ground-truth row must hold exactly k entries");
    }
    for (const auto& e : row) {
      w.u32(e.doc);
    }
    for (const auto& e : row) {
      w.f32(e.score);
    }
  }
  finish(out, "ground truth");
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_ground_truth(truth, out);
}

GroundTruth read_ground_truth(std::istream& in) {
  BinaryReader r(in);
  GroundTruth truth;
  const std::uint64_t nq = r.u64("ground-truth header");
  const std::uint64_t k = r.u64("ground-truth header");
  if (k > std::numeric_limits<std::uint32_t>::max()) {
    r.fail("ground-truth k out of range");
  }
  if (k == 0 && nq != 0) {
    r.fail("ground-truth k must be positive");
  }
  truth.k = k;
  if (k > 0) {
    r.require(nq, 8 * k, "ground-truth rows");
  }
  truth.queries.reserve(nq);
  for (std::uint64_t q = 0; q < nq; ++q) {
    const std::uint64_t row_start = r.offset();
    std::vector<ScoredDoc> row(k);
    for (auto& e : row) {
      e.doc = r.u32("ground-truth ids");
    }
    for (auto& e : row) {
      e.score = r.f32("ground-truth scores");
    }
    bool padding = false;
    for (std::uint64_t j = 0; j < k; ++j) {
      const auto& e = row[j];
      const bool pad = e.doc == kNoDoc;
      if (pad) {
        if (e.score != -std::numeric_limits<float>::infinity()) {
          throw FormatError("query " + std::to_string(q) + ": padding slot with a score",
                            row_start + 4 * k + 4 * j);
        }
        padding = true;
        continue;
      }
      if (padding) {
        throw FormatError("query " + std::to_string(q) + ": entry after padding",
                          row_start + 4 * j);
      }
      if (!std::isfinite(e.score)) {
        throw FormatError("query " + std::to_string(q) + ": non-finite score",
                          row_start + 4 * k + 4 * j);
      }
      if (j > 0 && !ranks_before(row[j - 1], e)) {
        throw FormatError("query " + std::to_string(q) + ": entries out of rank order",
                          row_start + 4 * j);
      }
    }
    std::vector<DocId> ids;
    for (const auto& e : row) {
      if (e.doc != kNoDoc) {
        ids.push_back(e.doc);
      }
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw FormatError("query " + std::to_string(q) + ": duplicate doc id", row_start);
    }
    truth.queries.push_back(std::move(row));
  }
  r.expect_end();
  return truth;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ground_truth(in);
}

void index_write(const InvertedIndex& index, const ForwardIndex& fwd, std::ostream& out) {
  BinaryWriter w(out);
  w.bytes("SWIX", 4);
  w.u32(kIndexFormatVersion);
  const BuildParams& p = index.params();
  w.u64(p.lambda);
  w.u64(p.beta);
  w.f64(p.alpha);
  w.u64(p.seed);
  write_csr_body(fwd.docs(), fwd.dim(), w);
  w.u64(index.num_lists());
  for (std::size_t i = 0; i < index.num_lists(); ++i) {
    const PostingList& list = index.lists()[i];
    w.u32(index.terms()[i]);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const auto& block : list) {
      w.u32(static_cast<std::uint32_t>(block.docs.size()));
      for (DocId d : block.docs) {
        w.u32(d);
      }
      w.u32(static_cast<std::uint32_t>(block.summary.size()));
      for (TermId id : block.summary.ids()) {
        w.u32(id);
      }
      for (float v : block.summary.weights()) {
        w.f32(v);
      }
    }
  }
  finish(out, "index");
}

void index_write(const InvertedIndex& index, const ForwardIndex& fwd,
                 const std::filesystem::path& path) {
  auto out = open_out(path);
  index_write(index, fwd, out);
}

StoredIndex index_read(std::istream& in) {
  BinaryReader r(in);
  char magic[4];
  r.read_bytes(magic, 4, "index header");
  if (std::string(magic, 4) != "SWIX") {
    r.fail("bad index magic");
  }
  if (r.u32("index header") != kIndexFormatVersion) {
    r.fail("unsupported index version");
  }
  BuildParams p;
  p.lambda = r.u64("index params");
  p.beta = r.u64("index params");
  p.alpha = r.f64("index params");
  p.seed = r.u64("index params");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(std::string("invalid build parameters: ") + e.what());
  }

  auto collection = read_csr_body(r);
  ForwardIndex fwd(std::move(collection.rows), collection.ncols);
  const std::uint64_t n = fwd.size();

  const std::uint64_t nlists = r.u64("index lists");
  r.require(nlists, 8, "index lists");
  std::vector<TermId> terms;
  std::vector<PostingList> lists;
  terms.reserve(nlists);
  lists.reserve(nlists);
  std::vector<DocId> seen;
  for (std::uint64_t l = 0; l < nlists; ++l) {
    const TermId term = r.u32("list header");
    if (!terms.empty() && term <= terms.back()) {
      r.fail("list terms not strictly increasing");
    }
    if (term >= fwd.dim()) {
      r.fail("list term out of range");
    }
    const std::uint32_t nblocks = r.u32("list header");
    if (nblocks == 0 || nblocks > p.beta) {
      r.fail("list block count out of range");
    }
    r.require(nblocks, 8, "list blocks");
    PostingList list;
    list.reserve(nblocks);
    seen.clear();
    for (std::uint32_t b = 0; b < nblocks; ++b) {
      const std::uint32_t ndocs = r.u32("block header");
      if (ndocs == 0) {
        r.fail("empty block");
      }
      r.require(ndocs, 4, "block docs");
      PostingBlock block;
      block.docs.resize(ndocs);
      for (auto& d : block.docs) {
        d = r.u32("block docs");
        if (d >= n) {
          r.fail("block doc id out of range");
        }
        if (fwd[d].at(term) == 0.0f) {
          r.fail("posting for a doc without the list's coordinate");
        }
        seen.push_back(d);
      }
      const std::uint32_t snnz = r.u32("summary header");
      r.require(snnz, 8, "summary");
      std::vector<TermId> ids(snnz);
      std::vector<float> weights(snnz);
      for (auto& id : ids) {
        id = r.u32("summary ids");
        if (id >= fwd.dim()) {
          r.fail("summary id out of range");
        }
      }
      for (auto& v : weights) {
        v = r.f32("summary weights");
      }
      if (auto err = SparseVector::check(ids, weights)) {
        r.fail("invalid summary: " + *err);
      }
      block.summary = SparseVector(std::move(ids), std::move(weights));
      list.push_back(std::move(block));
    }
    if (seen.size() > p.lambda) {
      r.fail("list holds more than lambda postings");
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      r.fail("doc repeated within a list");
    }
    terms.push_back(term);
    lists.push_back(std::move(list));
  }
  r.expect_end();
  return StoredIndex{std::move(fwd), InvertedIndex(p, std::move(terms), std::move(lists))};
}

StoredIndex index_read(const std::filesystem::path& path) {
  auto in = open_in(path);
  return index_read(in);
}

IndexSizes index_size_bytes(const InvertedIndex& index, const ForwardIndex& fwd) {
  IndexSizes sizes;
  sizes.forward = csr_bytes(fwd);
  sizes.inverted = 8;
  for (const auto& list : index.lists()) {
    sizes.inverted += 8;
    for (const auto& block : list) {
      sizes.inverted += 8 + 4 * std::uint64_t{block.docs.size()} + 8 * std::uint64_t{block.summary.size()};
    }
  }
  constexpr std::uint64_t kHeader = 8 + 32;
  sizes.total = kHeader + sizes.forward + sizes.inverted;
  return sizes;
}

bool within_budget(const IndexSizes& sizes, std::uint64_t graph_bytes, double multiplier) {
  return static_cast<double>(sizes.inverted + graph_bytes) <=
         multiplier * static_cast<double>(sizes.forward);
}

}  // namespace seismicwave
