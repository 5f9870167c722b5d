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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "seismicwave/forward_index.h"
#include "seismicwave/ground_truth.h"
#include "seismicwave/inverted_index.h"
#include "seismicwave/io.h"
#include "seismicwave/knn_graph.h"
#include "seismicwave/search.h"

namespace seismicwave {

/// Full scan; top-k under (score desc, doc asc). Throws if k > n.
std::vector<ScoredDoc> exact_topk(const SparseVector& q, const ForwardIndex& fwd, std::size_t k);

GroundTruth compute_ground_truth(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                                 std::size_t k, std::size_t threads = 0);

/// |result ∩ truth| / k. kNoDoc padding in either row is ignored.
double accuracy(std::span<const DocId> result, std::span<const ScoredDoc> truth, std::size_t k);
double accuracy(std::span<const ScoredDoc> result, std::span<const ScoredDoc> truth,
                std::size_t k);

/// Mean accuracy of stored result rows against ground truth (same k).
double mean_accuracy(const GroundTruth& results, const GroundTruth& truth);

struct LatencySummary {
  double mean_us = 0;
  double median_us = 0;
  double p95_us = 0;
  double p99_us = 0;
};

LatencySummary summarize_latencies(std::vector<double> micros);

struct BenchmarkOptions {
  std::size_t repetitions = 3;
  bool warmup = true;
};

struct RunReport {
  BuildParams build;
  SearchParams search;
  std::size_t kappa = 0;  // 0 when no graph is used
  LatencySummary latency;
  double accuracy = 0;
  std::vector<double> per_query_accuracy;
  std::size_t num_queries = 0;
  GroundTruth results;  // one row per query, padded to k; dropped by sweep
  IndexSizes sizes;
  std::uint64_t graph_bytes = 0;
  SearchStats stats;    // summed over queries, one pass
  RefineStats refine;   // summed over queries, one pass

  /// Deterministic work per query: blocks evaluated + docs scored, including
  /// docs scored during graph expansion.
  double mean_work() const;
};

/// Runs every query sequentially on the calling thread. Each timed query
/// covers base search plus refinement when p.expand is set. Per-query latency
/// is the mean over repetitions, after one untimed warm-up pass.
RunReport run_benchmark(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                        const InvertedIndex& index, const KnnGraph* graph,
                        const SearchParams& p, const GroundTruth& truth,
                        const BenchmarkOptions& opts = {});

enum class SweepMode { kSeismic, kObt, kKnn, kWave };

std::string_view to_string(SweepMode m);
std::optional<SweepMode> parse_sweep_mode(std::string_view name);
Traversal traversal_for(SweepMode m);
bool uses_graph(SweepMode m);

struct SweepGrid {
  std::vector<std::size_t> lambdas;
  std::vector<std::size_t> beta_divisors;  // beta = lambda / divisor
  std::vector<double> alphas;
  std::vector<std::size_t> kappas;
  std::vector<std::size_t> cuts;
  std::vector<float> heap_factors;

  /// Hyperparameter grid of the published experiments.
  static SweepGrid published();
  /// Same grid with lambda scaled down for ~10k-document collections. The
  /// published lambdas keep every posting of such a corpus and no config fits
  /// a small memory budget.
  static SweepGrid desk();
};

enum class GraphSource { kApprox, kExact };

struct SweepOptions {
  double budget = 2.0;
  SweepMode mode = SweepMode::kSeismic;  // single-mode overload only
  std::size_t k = 10;
  std::uint64_t seed = BuildParams{}.seed;
  GraphSource graph_source = GraphSource::kApprox;
  ApproxGraphParams approx;
  BenchmarkOptions bench;
  std::size_t threads = 0;  // index and graph builds only
};

inline constexpr std::array<int, 10> kAccuracyCutoffs = {90, 91, 92, 93, 94, 95, 96, 97, 98, 99};

/// True when `accuracy` meets cutoff% (with 1e-9 slack for float noise).
bool meets_cutoff(double accuracy, int cutoff_percent);

struct SweepResult {
  SweepMode mode = SweepMode::kSeismic;
  double budget = 0;
  std::vector<RunReport> runs;            // configs within budget
  std::size_t builds_over_budget = 0;
  std::array<std::optional<std::size_t>, 10> fastest;   // index into runs, per cutoff
  std::array<std::optional<std::size_t>, 10> cheapest;  // by mean_work, per cutoff
};

/// Builds every (lambda, beta, alpha[, kappa]) combination, drops builds whose
/// inverted index (+ graph) exceeds budget x forward size, runs every
/// (cut, heap_factor) on the rest, and picks the fastest run per cutoff.
SweepResult sweep(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                  const GroundTruth& truth, const SweepGrid& grid, const SweepOptions& opts);

/// Several modes over the same builds; each index is built once.
std::vector<SweepResult> sweep(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                               const GroundTruth& truth, const SweepGrid& grid,
                               std::span<const SweepMode> modes, const SweepOptions& opts);

/// Reselects best-per-cutoff entries after runs were added or filtered.
void select_best(SweepResult& result);

/// One CSV row per run. Columns: mode,budget,lambda,beta,alpha,kappa,cut,
/// heap_factor,accuracy,mean_us,median_us,p95_us,p99_us,mean_work,
/// forward_bytes,inverted_bytes,graph_bytes
void write_sweep_csv(const SweepResult& result, std::ostream& out, bool header = true);

/// Mean latency per accuracy cutoff 90..99, "–" where unreachable.
void print_cutoff_table(std::span<const SweepResult> results, std::ostream& out);

struct Breakdown {
  std::vector<double> shares;  // per list rank, first min(cut, 10) ranks
  double mean_query_us = 0;
  double mean_list_us = 0;     // time inside list processing
};

/// Share of list-processing time spent on each list rank, aggregated over all
/// queries (ratio of summed times).
Breakdown breakdown_report(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                           const InvertedIndex& index, const SearchParams& p,
                           std::size_t repetitions = 1);

}  // namespace seismicwave
