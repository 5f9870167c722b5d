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


// seismicwave: build, search and evaluate block-clustered sparse indexes.
//
// Exit status: 0 on success, 2 for usage or parameter errors, 3 for bad or
// unreadable data.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seismicwave/eval.h"
#include "seismicwave/format_error.h"
#include "seismicwave/io.h"
#include "seismicwave/knn_graph.h"
#include "seismicwave/synthetic.h"

namespace sw = seismicwave;

namespace {

constexpr int kUsageError = 2;
constexpr int kDataError = 3;

// Bad flag values found after parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Missing files, malformed contents, or inputs that disagree with each other.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw DataError("no such file: " + path);
  }
}

sw::ForwardIndex load_corpus(const std::string& path) {
  require_file(path);
  sw::SparseCollection c = sw::read_csr(std::filesystem::path(path));
  if (c.rows.empty()) {
    throw DataError("corpus is empty: " + path);
  }
  return sw::ForwardIndex(std::move(c.rows), c.ncols);
}

std::vector<sw::SparseVector> load_queries(const std::string& path) {
  require_file(path);
  return sw::read_csr(std::filesystem::path(path)).rows;
}

sw::GroundTruth load_truth(const std::string& path) {
  require_file(path);
  return sw::read_ground_truth(std::filesystem::path(path));
}

// Runs a parameter check, reporting its failure as a usage error.
template <typename Fn>
void check_params(Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_sizes(const sw::IndexSizes& s) {
  std::cout << "forward_bytes " << s.forward << "\n"
            << "inverted_bytes " << s.inverted << "\n"
            << "total_bytes " << s.total << "\n"
            << "inverted_over_forward " << std::fixed << std::setprecision(4)
            << static_cast<double>(s.inverted) / static_cast<double>(s.forward) << "\n";
  std::cout.unsetf(std::ios::floatfield);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open for writing: " + path);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string corpus_out;
  std::string queries_out;
  sw::SyntheticConfig cfg;
};

void run_generate(const GenerateArgs& a) {
  const sw::SyntheticData data = sw::generate_synthetic(a.cfg);
  sw::write_csr(data.docs, a.cfg.dim, std::filesystem::path(a.corpus_out));
  sw::write_csr(data.queries, a.cfg.dim, std::filesystem::path(a.queries_out));
  std::size_t nnz = 0;
  for (const auto& d : data.docs) {
    nnz += d.size();
  }
  std::cout << "docs " << data.docs.size() << "\nqueries " << data.queries.size()
            << "\ndim " << a.cfg.dim << "\nmean_doc_nnz "
            << static_cast<double>(nnz) / static_cast<double>(data.docs.size()) << "\n";
}

struct BuildIndexArgs {
  std::string corpus;
  std::string out;
  sw::BuildParams params;
  std::size_t threads = 0;
};

void run_build_index(const BuildIndexArgs& a) {
  check_params([&] { a.params.validate(); });
  const sw::ForwardIndex fwd = load_corpus(a.corpus);
  const auto t0 = std::chrono::steady_clock::now();
  const sw::InvertedIndex index = sw::build_inverted(fwd, a.params, a.threads);
  const double build_s = seconds_since(t0);
  sw::index_write(index, fwd, std::filesystem::path(a.out));
  std::cout << "docs " << fwd.size() << "\nlists " << index.num_lists() << "\nbuild_seconds "
            << build_s << "\n";
  print_sizes(sw::index_size_bytes(index, fwd));
}

struct BuildGraphArgs {
  std::string corpus;
  std::string out;
  std::size_t kappa = 10;
  bool exact = false;
  bool approx = false;
  sw::ApproxGraphParams approx_params;
  std::size_t threads = 0;
};

void run_build_graph(const BuildGraphArgs& a) {
  if (a.kappa == 0) {
    throw UsageError("kappa must be positive");
  }
  if (!a.exact) {
    sw::BuildParams bp;
    bp.lambda = a.approx_params.lambda;
    bp.beta = a.approx_params.beta;
    bp.alpha = a.approx_params.alpha;
    check_params([&] { bp.validate(); });
    sw::SearchParams sp;
    sp.cut = a.approx_params.cut;
    sp.heap_factor = a.approx_params.heap_factor;
    check_params([&] { sp.validate(); });
  }
  const sw::ForwardIndex fwd = load_corpus(a.corpus);
  if (a.kappa >= fwd.size()) {
    throw UsageError("kappa must be smaller than the number of documents (" +
                     std::to_string(fwd.size()) + ")");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const sw::KnnGraph g = a.exact ? sw::build_knn_exact(fwd, a.kappa, a.threads)
                                 : sw::build_knn_approx(fwd, a.kappa, a.approx_params, a.threads);
  const double build_s = seconds_since(t0);
  sw::graph_write(g, std::filesystem::path(a.out));
  const std::size_t bits = sw::bits_per_id(fwd.size());
  const std::uint64_t formula_bits =
      static_cast<std::uint64_t>(bits) * fwd.size() * static_cast<std::uint64_t>(a.kappa);
  std::cout << "construction " << (a.exact ? "exact" : "approx") << "\nn " << fwd.size()
            << "\nkappa " << a.kappa << "\nbuild_seconds " << build_s << "\nbits_per_id "
            << bits << "\nformula_bits " << formula_bits << "\npayload_bytes "
            << sw::graph_payload_bytes(fwd.size(), a.kappa) << "\nfile_bytes "
            << std::filesystem::file_size(a.out) << "\n";
}

struct SearchArgs {
  std::string index;
  std::string graph;
  std::string queries;
  std::string out;
  std::string truth;
  std::string obt = "arbitrary";
  sw::SearchParams params;
};

void run_search(SearchArgs a) {
  const auto obt = sw::parse_traversal(a.obt);
  if (!obt) {
    throw UsageError("unknown traversal '" + a.obt + "' (arbitrary, first, all)");
  }
  a.params.obt = *obt;
  check_params([&] { a.params.validate(); });
  if (a.params.expand && a.graph.empty()) {
    throw UsageError("--expand requires --graph");
  }
  require_file(a.index);
  const sw::StoredIndex stored = sw::index_read(std::filesystem::path(a.index));
  std::optional<sw::KnnGraph> graph;
  if (!a.graph.empty()) {
    require_file(a.graph);
    graph = sw::graph_read(std::filesystem::path(a.graph));
    if (graph->n() != stored.forward.size()) {
      throw DataError("graph and index cover different collections");
    }
  }
  const auto queries = load_queries(a.queries);

  sw::Searcher searcher(stored.inverted, stored.forward);
  sw::GroundTruth out;
  out.k = a.params.k;
  std::vector<double> micros;
  sw::SearchStats stats;
  sw::RefineStats refine;
  for (const auto& q : queries) {
    const auto t0 = std::chrono::steady_clock::now();
    sw::WaveResult r = sw::search_wave(searcher, graph ? &*graph : nullptr, q, a.params);
    micros.push_back(seconds_since(t0) * 1e6);
    stats += r.stats;
    refine.docs_scored += r.refine.docs_scored;
    refine.inserted += r.refine.inserted;
    out.queries.push_back(sw::pad_row(std::move(r.results), a.params.k));
  }
  sw::write_ground_truth(out, std::filesystem::path(a.out));

  const sw::LatencySummary lat = sw::summarize_latencies(micros);
  const double nq = std::max<double>(1.0, static_cast<double>(queries.size()));
  std::cout << "threads 1 (latency is measured single-threaded)\n"
            << "queries " << queries.size() << "\nmean_us " << lat.mean_us << "\nmedian_us "
            << lat.median_us << "\np95_us " << lat.p95_us << "\np99_us " << lat.p99_us
            << "\nmean_blocks_evaluated " << static_cast<double>(stats.blocks_evaluated) / nq
            << "\nmean_docs_scored "
            << static_cast<double>(stats.docs_scored + refine.docs_scored) / nq << "\n";
  if (!a.truth.empty()) {
    const sw::GroundTruth truth = load_truth(a.truth);
    if (truth.k != out.k || truth.queries.size() != out.queries.size()) {
      throw DataError("results and truth differ in k or query count");
    }
    std::cout << "accuracy " << sw::mean_accuracy(out, truth) << "\n";
  }
}

struct GroundTruthArgs {
  std::string corpus;
  std::string queries;
  std::string out;
  std::size_t k = 10;
  std::size_t threads = 0;
};

void run_ground_truth(const GroundTruthArgs& a) {
  if (a.k == 0) {
    throw UsageError("k must be positive");
  }
  const sw::ForwardIndex fwd = load_corpus(a.corpus);
  if (a.k > fwd.size()) {
    throw UsageError("k exceeds the number of documents");
  }
  const auto queries = load_queries(a.queries);
  sw::write_ground_truth(sw::compute_ground_truth(queries, fwd, a.k, a.threads),
                         std::filesystem::path(a.out));
  std::cout << "queries " << queries.size() << "\nk " << a.k << "\n";
}

struct EvaluateArgs {
  std::string results;
  std::string truth;
  std::size_t k = 10;
  std::string csv;
};

void run_evaluate(const EvaluateArgs& a) {
  const sw::GroundTruth results = load_truth(a.results);
  const sw::GroundTruth truth = load_truth(a.truth);
  if (results.k != a.k || truth.k != a.k) {
    throw DataError("k mismatch: results k=" + std::to_string(results.k) +
                    ", truth k=" + std::to_string(truth.k) + ", requested " +
                    std::to_string(a.k));
  }
  if (results.queries.size() != truth.queries.size()) {
    throw DataError("results and truth differ in query count");
  }
  if (!a.csv.empty()) {
    std::ofstream csv = open_out(a.csv);
    csv << "query,accuracy\n";
    for (std::size_t i = 0; i < truth.queries.size(); ++i) {
      csv << i << "," << sw::accuracy(results.queries[i], truth.queries[i], a.k) << "\n";
    }
  }
  std::cout << "queries,k,accuracy\n"
            << truth.queries.size() << "," << a.k << "," << sw::mean_accuracy(results, truth)
            << "\n";
}

struct SweepArgs {
  std::string corpus;
  std::string queries;
  std::string truth;
  std::vector<std::string> modes = {"seismic"};
  std::string grid = "desk";
  std::string graph = "approx";
  std::string csv;
  sw::SweepOptions opts;
  sw::SweepGrid axes;  // non-empty axes replace the chosen grid's
};

void run_sweep(SweepArgs a) {
  if (!(a.opts.budget > 0)) {
    throw UsageError("budget must be positive");
  }
  std::vector<sw::SweepMode> modes;
  for (const auto& name : a.modes) {
    const auto m = sw::parse_sweep_mode(name);
    if (!m) {
      throw UsageError("unknown mode '" + name + "' (seismic, obt, knn, wave)");
    }
    modes.push_back(*m);
  }
  sw::SweepGrid grid = a.grid == "published" ? sw::SweepGrid::published()
                                             : sw::SweepGrid::desk();
  auto override_axis = [](auto& axis, const auto& values) {
    if (!values.empty()) {
      axis = values;
    }
  };
  override_axis(grid.lambdas, a.axes.lambdas);
  override_axis(grid.beta_divisors, a.axes.beta_divisors);
  override_axis(grid.alphas, a.axes.alphas);
  override_axis(grid.kappas, a.axes.kappas);
  override_axis(grid.cuts, a.axes.cuts);
  override_axis(grid.heap_factors, a.axes.heap_factors);
  a.opts.graph_source = a.graph == "exact" ? sw::GraphSource::kExact : sw::GraphSource::kApprox;

  const sw::ForwardIndex fwd = load_corpus(a.corpus);
  const auto queries = load_queries(a.queries);
  const sw::GroundTruth truth = load_truth(a.truth);
  if (truth.queries.size() != queries.size()) {
    throw DataError("truth and queries differ in count");
  }
  if (truth.k < a.opts.k) {
    throw DataError("truth holds fewer than k results per query");
  }
  a.opts.k = truth.k;

  const auto results = sw::sweep(queries, fwd, truth, grid, modes, a.opts);
  std::cout << "threads 1 for queries (latency is measured single-threaded)\n";
  for (const auto& r : results) {
    std::cout << sw::to_string(r.mode) << ": " << r.runs.size() << " runs within budget, "
              << r.builds_over_budget << " builds over budget\n";
  }
  sw::print_cutoff_table(results, std::cout);
  if (!a.csv.empty()) {
    std::ofstream csv = open_out(a.csv);
    bool header = true;
    for (const auto& r : results) {
      sw::write_sweep_csv(r, csv, header);
      header = false;
    }
  }
}

struct BreakdownArgs {
  std::string index;
  std::string queries;
  std::string csv;
  sw::SearchParams params;
  std::size_t repetitions = 3;
};

void run_breakdown(const BreakdownArgs& a) {
  check_params([&] { a.params.validate(); });
  require_file(a.index);
  const sw::StoredIndex stored = sw::index_read(std::filesystem::path(a.index));
  const auto queries = load_queries(a.queries);
  const sw::Breakdown b =
      sw::breakdown_report(queries, stored.forward, stored.inverted, a.params, a.repetitions);
  std::cout << "threads 1 (latency is measured single-threaded)\n"
            << "mean_query_us " << b.mean_query_us << "\nmean_list_us " << b.mean_list_us
            << "\nlist_rank  share\n";
  for (std::size_t i = 0; i < b.shares.size(); ++i) {
    std::cout << std::setw(9) << i + 1 << "  " << std::fixed << std::setprecision(2)
              << 100.0 * b.shares[i] << "%\n";
  }
  std::cout.unsetf(std::ios::floatfield);
  if (!a.csv.empty()) {
    std::ofstream csv = open_out(a.csv);
    csv << "list_rank,share\n";
    for (std::size_t i = 0; i < b.shares.size(); ++i) {
      csv << i + 1 << "," << b.shares[i] << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-clustered sparse inverted index with kNN-graph refinement"};
  app.require_subcommand(1);
  std::uint64_t seed = sw::BuildParams{}.seed;
  std::size_t threads = 0;
  app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--threads", threads, "Build threads (0 = hardware)")->capture_default_str();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus and query set");
  generate->add_option("--corpus-out", gen.corpus_out)->required();
  generate->add_option("--queries-out", gen.queries_out)->required();
  generate->add_option("--docs", gen.cfg.num_docs)->capture_default_str();
  generate->add_option("--queries", gen.cfg.num_queries)->capture_default_str();
  generate->add_option("--dim", gen.cfg.dim)->capture_default_str();

  BuildIndexArgs bi;
  auto* build_index = app.add_subcommand("build-index", "Build and store an inverted index");
  build_index->add_option("--corpus", bi.corpus)->required();
  build_index->add_option("--out", bi.out)->required();
  build_index->add_option("--lambda", bi.params.lambda)->capture_default_str();
  build_index->add_option("--beta", bi.params.beta)->capture_default_str();
  build_index->add_option("--alpha", bi.params.alpha)->capture_default_str();

  BuildGraphArgs bg;
  auto* build_graph = app.add_subcommand("build-graph", "Build and store a kappa-NN graph");
  build_graph->add_option("--corpus", bg.corpus)->required();
  build_graph->add_option("--out", bg.out)->required();
  build_graph->add_option("--kappa", bg.kappa)->capture_default_str();
  auto* exact_flag = build_graph->add_flag("--exact", bg.exact, "Brute-force construction");
  auto* approx_flag = build_graph->add_flag("--approx", bg.approx, "Index-based (default)");
  exact_flag->excludes(approx_flag);
  build_graph->add_option("--lambda", bg.approx_params.lambda)->capture_default_str();
  build_graph->add_option("--beta", bg.approx_params.beta)->capture_default_str();
  build_graph->add_option("--alpha", bg.approx_params.alpha)->capture_default_str();
  build_graph->add_option("--cut", bg.approx_params.cut)->capture_default_str();
  build_graph->add_option("--heap-factor", bg.approx_params.heap_factor)->capture_default_str();

  SearchArgs se;
  auto* search = app.add_subcommand("search", "Answer a query set from a stored index");
  search->add_option("--index", se.index)->required();
  search->add_option("--graph", se.graph, "kappa-NN graph for --expand");
  search->add_option("--queries", se.queries)->required();
  search->add_option("--out", se.out)->required();
  search->add_option("--truth", se.truth, "Report accuracy against this ground truth");
  search->add_option("--k", se.params.k)->capture_default_str();
  search->add_option("--cut", se.params.cut)->capture_default_str();
  search->add_option("--heap-factor", se.params.heap_factor)->capture_default_str();
  search->add_option("--obt", se.obt, "Block order: arbitrary, first, all")
      ->capture_default_str();
  search->add_flag("--expand", se.params.expand, "Refine results through the graph");

  GroundTruthArgs gt;
  auto* ground_truth = app.add_subcommand("ground-truth", "Exact top-k by full scan");
  ground_truth->add_option("--corpus", gt.corpus)->required();
  ground_truth->add_option("--queries", gt.queries)->required();
  ground_truth->add_option("--out", gt.out)->required();
  ground_truth->add_option("--k", gt.k)->capture_default_str();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy of stored results");
  evaluate->add_option("--results", ev.results)->required();
  evaluate->add_option("--truth", ev.truth)->required();
  evaluate->add_option("--k", ev.k)->capture_default_str();
  evaluate->add_option("--csv", ev.csv, "Per-query accuracy CSV");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Hyperparameter sweep under a memory budget");
  sweep->add_option("--corpus", sa.corpus)->required();
  sweep->add_option("--queries", sa.queries)->required();
  sweep->add_option("--truth", sa.truth)->required();
  sweep->add_option("--budget", sa.opts.budget)->capture_default_str();
  sweep->add_option("--mode", sa.modes, "seismic, obt, knn, wave (repeatable)")
      ->capture_default_str();
  sweep->add_option("--grid", sa.grid)
      ->check(CLI::IsMember({"desk", "published"}))
      ->capture_default_str();
  sweep->add_option("--graph", sa.graph, "Graph construction for knn and wave modes")
      ->check(CLI::IsMember({"approx", "exact"}))
      ->capture_default_str();
  sweep->add_option("--repetitions", sa.opts.bench.repetitions)->capture_default_str();
  sweep->add_option("--csv", sa.csv, "One row per run");
  sweep->add_option("--lambdas", sa.axes.lambdas, "Replace the grid's lambda axis");
  sweep->add_option("--beta-divisors", sa.axes.beta_divisors, "Replace the lambda/beta axis");
  sweep->add_option("--alphas", sa.axes.alphas, "Replace the alpha axis");
  sweep->add_option("--kappas", sa.axes.kappas, "Replace the kappa axis");
  sweep->add_option("--cuts", sa.axes.cuts, "Replace the cut axis");
  sweep->add_option("--heap-factors", sa.axes.heap_factors, "Replace the heap_factor axis");

  BreakdownArgs br;
  auto* breakdown = app.add_subcommand("breakdown", "Time share per list rank");
  breakdown->add_option("--index", br.index)->required();
  breakdown->add_option("--queries", br.queries)->required();
  breakdown->add_option("--cut", br.params.cut)->capture_default_str();
  breakdown->add_option("--k", br.params.k)->capture_default_str();
  breakdown->add_option("--heap-factor", br.params.heap_factor)->capture_default_str();
  breakdown->add_option("--repetitions", br.repetitions)->capture_default_str();
  breakdown->add_option("--csv", br.csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*generate) {
      gen.cfg.seed = seed;
      run_generate(gen);
    } else if (*build_index) {
      bi.params.seed = seed;
      bi.threads = threads;
      run_build_index(bi);
    } else if (*build_graph) {
      bg.approx_params.seed = seed;
      bg.threads = threads;
      run_build_graph(bg);
    } else if (*search) {
      run_search(se);
    } else if (*ground_truth) {
      gt.threads = threads;
      run_ground_truth(gt);
    } else if (*evaluate) {
      run_evaluate(ev);
    } else if (*sweep) {
      sa.opts.seed = seed;
      sa.opts.approx.seed = seed;
      sa.opts.threads = threads;
      run_sweep(sa);
    } else if (*breakdown) {
      run_breakdown(br);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const sw::FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    // anything left is an input the library rejected after loading
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  }
  return 0;
}
