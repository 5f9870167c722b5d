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

#include "seismicwave/eval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "seismicwave/parallel.h"

namespace seismicwave {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) {
    return 0.0;
  }
  // nearest-rank
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

std::vector<ScoredDoc> exact_topk(const SparseVector& q, const ForwardIndex& fwd, std::size_t k) {
  if (k == 0 || k > fwd.size()) {
    throw std::invalid_argument("k must be in [1, n]");
  }
  ScoredHeap heap(k);
  for (DocId d = 0; d < fwd.size(); ++d) {
    heap.insert(dot(q, fwd[d]), d);
  }
  return heap.sorted();
}

GroundTruth compute_ground_truth(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                                 std::size_t k, std::size_t threads) {
  GroundTruth truth;
  truth.k = k;
  truth.queries.resize(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t, std::size_t i) {
    truth.queries[i] = exact_topk(queries[i], fwd, k);
  });
  return truth;
}

double accuracy(std::span<const DocId> result, std::span<const ScoredDoc> truth, std::size_t k) {
  if (k == 0) {
    throw std::invalid_argument("k must be positive");
  }
  std::unordered_set<DocId> expected;
  for (const auto& t : truth) {
    if (t.doc != kNoDoc) {
      expected.insert(t.doc);
    }
  }
  std::unordered_set<DocId> hits;
  for (DocId d : result) {
    if (d != kNoDoc && expected.contains(d)) {
      hits.insert(d);
    }
  }
  return static_cast<double>(hits.size()) / static_cast<double>(k);
}

double accuracy(std::span<const ScoredDoc> result, std::span<const ScoredDoc> truth,
                std::size_t k) {
  std::vector<DocId> ids;
  ids.reserve(result.size());
  for (const auto& r : result) {
    ids.push_back(r.doc);
  }
  return accuracy(ids, truth, k);
}

double mean_accuracy(const GroundTruth& results, const GroundTruth& truth) {
  if (results.k != truth.k) {
    throw std::invalid_argument("k mismatch between results and ground truth");
  }
  if (results.queries.size() != truth.queries.size()) {
    throw std::invalid_argument("query count mismatch between results and ground truth");
  }
  if (truth.queries.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.queries.size(); ++i) {
    sum += accuracy(std::span<const ScoredDoc>(results.queries[i]), truth.queries[i], truth.k);
  }
  return sum / static_cast<double>(truth.queries.size());
}

LatencySummary summarize_latencies(std::vector<double> micros) {
  LatencySummary s;
  if (micros.empty()) {
    return s;
  }
  std::sort(micros.begin(), micros.end());
  double sum = 0.0;
  for (double m : micros) {
    sum += m;
  }
  s.mean_us = sum / static_cast<double>(micros.size());
  s.median_us = percentile(micros, 0.5);
  s.p95_us = percentile(micros, 0.95);
  s.p99_us = percentile(micros, 0.99);
  return s;
}

double RunReport::mean_work() const {
  if (num_queries == 0) {
    return 0.0;
  }
  const auto total = stats.blocks_evaluated + stats.docs_scored + refine.docs_scored;
  return static_cast<double>(total) / static_cast<double>(num_queries);
}

RunReport run_benchmark(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                        const InvertedIndex& index, const KnnGraph* graph,
                        const SearchParams& p, const GroundTruth& truth,
                        const BenchmarkOptions& opts) {
  p.validate();
  if (p.expand && graph == nullptr) {
    throw std::invalid_argument("expand requires a kappa-NN graph");
  }
  if (truth.k != p.k || truth.queries.size() != queries.size()) {
    throw std::invalid_argument("ground truth does not match the queries or k");
  }
  const std::size_t reps = std::max<std::size_t>(1, opts.repetitions);

  RunReport report;
  report.build = index.params();
  report.search = p;
  report.kappa = p.expand ? graph->kappa() : 0;
  report.sizes = index_size_bytes(index, fwd);
  report.graph_bytes = p.expand ? graph_file_bytes(graph->n(), graph->kappa()) : 0;
  report.results.k = p.k;
  report.num_queries = queries.size();
  report.results.queries.resize(queries.size());

  Searcher searcher(index, fwd);
  if (opts.warmup) {
    for (const auto& q : queries) {
      (void)search_wave(searcher, graph, q, p);
    }
  }

  std::vector<double> per_query(queries.size(), 0.0);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto start = Clock::now();
      WaveResult r = search_wave(searcher, graph, queries[i], p);
      per_query[i] += micros_since(start);
      if (rep == 0) {
        report.stats += r.stats;
        report.refine.docs_scored += r.refine.docs_scored;
        report.refine.inserted += r.refine.inserted;
        report.results.queries[i] = pad_row(std::move(r.results), p.k);
      }
    }
  }
  for (auto& t : per_query) {
    t /= static_cast<double>(reps);
  }
  report.latency = summarize_latencies(std::move(per_query));

  report.per_query_accuracy.resize(queries.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    report.per_query_accuracy[i] =
        accuracy(std::span<const ScoredDoc>(report.results.queries[i]), truth.queries[i], p.k);
    sum += report.per_query_accuracy[i];
  }
  report.accuracy = queries.empty() ? 0.0 : sum / static_cast<double>(queries.size());
  return report;
}

std::string_view to_string(SweepMode m) {
  switch (m) {
    case SweepMode::kSeismic:
      return "seismic";
    case SweepMode::kObt:
      return "obt";
    case SweepMode::kKnn:
      return "knn";
    case SweepMode::kWave:
      return "wave";
  }
  return "unknown";
}

std::optional<SweepMode> parse_sweep_mode(std::string_view name) {
  if (name == "seismic") return SweepMode::kSeismic;
  if (name == "obt") return SweepMode::kObt;
  if (name == "knn") return SweepMode::kKnn;
  if (name == "wave") return SweepMode::kWave;
  return std::nullopt;
}

Traversal traversal_for(SweepMode m) {
  return (m == SweepMode::kObt || m == SweepMode::kWave) ? Traversal::kFirstListOrdered
                                                         : Traversal::kArbitrary;
}

bool uses_graph(SweepMode m) { return m == SweepMode::kKnn || m == SweepMode::kWave; }

SweepGrid SweepGrid::published() {
  SweepGrid g;
  g.lambdas = {2000, 2500, 3000, 4000, 5000, 6000};
  g.beta_divisors = {10, 5};
  g.alphas = {0.4, 0.5, 0.6};
  g.kappas = {10, 20, 30, 40, 50};
  g.cuts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  g.heap_factors = {0.7f, 0.8f, 0.9f, 1.0f};
  return g;
}

SweepGrid SweepGrid::desk() {
  SweepGrid g = published();
  // lambda / 200 keeps the retained share of postings close to the large
  // collections the published grid was tuned for
  g.lambdas = {10, 12, 15, 20, 25, 30};
  return g;
}

bool meets_cutoff(double accuracy, int cutoff_percent) {
  return accuracy + 1e-9 >= static_cast<double>(cutoff_percent) / 100.0;
}

void select_best(SweepResult& result) {
  result.fastest.fill(std::nullopt);
  result.cheapest.fill(std::nullopt);
  for (std::size_t c = 0; c < kAccuracyCutoffs.size(); ++c) {
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
      const RunReport& run = result.runs[i];
      if (!meets_cutoff(run.accuracy, kAccuracyCutoffs[c])) {
        continue;
      }
      auto& fast = result.fastest[c];
      if (!fast || run.latency.mean_us < result.runs[*fast].latency.mean_us) {
        fast = i;
      }
      auto& cheap = result.cheapest[c];
      if (!cheap || run.mean_work() < result.runs[*cheap].mean_work()) {
        cheap = i;
      }
    }
  }
}

std::vector<SweepResult> sweep(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                               const GroundTruth& truth, const SweepGrid& grid,
                               std::span<const SweepMode> modes, const SweepOptions& opts) {
  std::vector<SweepResult> results(modes.size());
  bool any_graph = false;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    results[m].mode = modes[m];
    results[m].budget = opts.budget;
    any_graph = any_graph || uses_graph(modes[m]);
  }

  KnnGraph base_graph;
  if (any_graph) {
    if (grid.kappas.empty()) {
      throw std::invalid_argument("graph sweep needs at least one kappa");
    }
    const std::size_t max_kappa = *std::max_element(grid.kappas.begin(), grid.kappas.end());
    base_graph = opts.graph_source == GraphSource::kExact
                     ? build_knn_exact(fwd, max_kappa, opts.threads)
                     : build_knn_approx(fwd, max_kappa, opts.approx, opts.threads);
  }

  for (std::size_t lambda : grid.lambdas) {
    for (std::size_t divisor : grid.beta_divisors) {
      for (double alpha : grid.alphas) {
        BuildParams bp;
        bp.lambda = lambda;
        bp.beta = std::max<std::size_t>(1, lambda / divisor);
        bp.alpha = alpha;
        bp.seed = opts.seed;
        const InvertedIndex index = build_inverted(fwd, bp, opts.threads);
        const IndexSizes sizes = index_size_bytes(index, fwd);

        for (std::size_t m = 0; m < modes.size(); ++m) {
          const bool graph_mode = uses_graph(modes[m]);
          const std::vector<std::size_t> kappas =
              graph_mode ? grid.kappas : std::vector<std::size_t>{0};
          SweepResult& result = results[m];
          for (std::size_t kappa : kappas) {
            const std::uint64_t graph_bytes =
                graph_mode ? graph_file_bytes(fwd.size(), kappa) : 0;
            if (!within_budget(sizes, graph_bytes, opts.budget)) {
              ++result.builds_over_budget;
              continue;
            }
            const KnnGraph graph = graph_mode ? base_graph.truncated(kappa) : KnnGraph{};
            for (std::size_t cut : grid.cuts) {
              for (float hf : grid.heap_factors) {
                SearchParams sp;
                sp.k = opts.k;
                sp.cut = cut;
                sp.heap_factor = hf;
                sp.obt = traversal_for(modes[m]);
                sp.expand = graph_mode;
                result.runs.push_back(run_benchmark(queries, fwd, index,
                                                    graph_mode ? &graph : nullptr, sp, truth,
                                                    opts.bench));
                // per-query rows are not needed once accuracy is known
                result.runs.back().results.queries.clear();
                result.runs.back().results.queries.shrink_to_fit();
                result.runs.back().per_query_accuracy.clear();
                result.runs.back().per_query_accuracy.shrink_to_fit();
              }
            }
          }
        }
      }
    }
  }
  for (auto& r : results) {
    select_best(r);
  }
  return results;
}

SweepResult sweep(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                  const GroundTruth& truth, const SweepGrid& grid, const SweepOptions& opts) {
  const SweepMode modes[] = {opts.mode};
  return std::move(sweep(queries, fwd, truth, grid, modes, opts).front());
}

void write_sweep_csv(const SweepResult& result, std::ostream& out, bool header) {
  if (header) {
    out << "mode,budget,lambda,beta,alpha,kappa,cut,heap_factor,accuracy,mean_us,median_us,"
           "p95_us,p99_us,mean_work,forward_bytes,inverted_bytes,graph_bytes\n";
  }
  for (const auto& r : result.runs) {
    out << to_string(result.mode) << ',' << result.budget << ',' << r.build.lambda << ','
        << r.build.beta << ',' << r.build.alpha << ',' << r.kappa << ',' << r.search.cut << ','
        << r.search.heap_factor << ',' << std::setprecision(6) << r.accuracy << ','
        << r.latency.mean_us << ',' << r.latency.median_us << ',' << r.latency.p95_us << ','
        << r.latency.p99_us << ',' << r.mean_work() << ',' << r.sizes.forward << ','
        << r.sizes.inverted << ',' << r.graph_bytes << '\n';
  }
}

void print_cutoff_table(std::span<const SweepResult> results, std::ostream& out) {
  out << std::left << std::setw(10) << "method" << std::setw(8) << "budget";
  for (int c : kAccuracyCutoffs) {
    out << std::right << std::setw(9) << c;
  }
  out << '\n';
  for (const auto& res : results) {
    std::ostringstream budget;
    budget << res.budget << 'x';
    out << std::left << std::setw(10) << to_string(res.mode) << std::setw(8) << budget.str();
    for (const auto& best : res.fastest) {
      std::ostringstream cell;
      if (best) {
        cell << std::fixed << std::setprecision(1) << res.runs[*best].latency.mean_us;
        out << std::right << std::setw(9) << cell.str();
      } else {
        // en dash is 3 bytes in UTF-8 but one column wide
        out << std::string(8, ' ') << "–";
      }
    }
    out << '\n';
  }
}

Breakdown breakdown_report(std::span<const SparseVector> queries, const ForwardIndex& fwd,
                           const InvertedIndex& index, const SearchParams& p,
                           std::size_t repetitions) {
  p.validate();
  const std::size_t ranks = std::min<std::size_t>(p.cut, 10);
  Searcher searcher(index, fwd);
  SearchOptions opts;
  opts.time_lists = true;

  std::vector<double> per_rank(p.cut, 0.0);
  double total_query = 0.0;
  std::size_t runs = 0;
  for (std::size_t rep = 0; rep < std::max<std::size_t>(1, repetitions); ++rep) {
    for (const auto& q : queries) {
      ScoredHeap heap(p.k);
      const auto start = Clock::now();
      const SearchStats stats = searcher.search_into(q, p, heap, opts);
      total_query += micros_since(start);
      ++runs;
      for (std::size_t r = 0; r < stats.per_list_nanos.size(); ++r) {
        per_rank[r] += static_cast<double>(stats.per_list_nanos[r]);
      }
    }
  }

  Breakdown out;
  double list_total = 0.0;
  for (double v : per_rank) {
    list_total += v;
  }
  out.shares.assign(ranks, 0.0);
  if (list_total > 0.0) {
    for (std::size_t r = 0; r < ranks; ++r) {
      out.shares[r] = per_rank[r] / list_total;
    }
  }
  if (runs > 0) {
    out.mean_query_us = total_query / static_cast<double>(runs);
    out.mean_list_us = list_total / 1000.0 / static_cast<double>(runs);
  }
  return out;
}

}  // namespace seismicwave
