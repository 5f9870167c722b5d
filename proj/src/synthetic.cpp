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

#include "seismicwave/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace seismicwave {

namespace {

struct Topic {
  std::vector<TermId> terms;
  std::discrete_distribution<std::size_t> pick;
  std::vector<float> affinity;  // per term, scales weights
};

class Generator {
 public:
  explicit Generator(const SyntheticConfig& c) : cfg_(c), rng_(c.seed) {
    // Vocabulary popularity: Zipf over a random permutation of term ids.
    std::vector<TermId> perm(cfg_.dim);
    std::iota(perm.begin(), perm.end(), TermId{0});
    std::shuffle(perm.begin(), perm.end(), rng_);
    std::vector<double> pop(cfg_.dim);
    for (std::size_t r = 0; r < cfg_.dim; ++r) {
      pop[perm[r]] = 1.0 / std::pow(static_cast<double>(r) + 10.0, cfg_.zipf_exponent);
    }
    global_ = std::discrete_distribution<std::size_t>(pop.begin(), pop.end());

    std::lognormal_distribution<double> affinity(0.0, 0.6);
    for (std::size_t t = 0; t < cfg_.num_topics; ++t) {
      Topic topic;
      std::unordered_map<TermId, bool> used;
      while (topic.terms.size() < cfg_.topic_terms) {
        const auto term = static_cast<TermId>(global_(rng_));
        if (used.emplace(term, true).second) {
          topic.terms.push_back(term);
        }
      }
      std::vector<double> w(topic.terms.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        // within a topic, a few terms dominate
        w[i] = 1.0 / std::pow(static_cast<double>(i) + 1.0, 0.8);
        topic.affinity.push_back(static_cast<float>(affinity(rng_)));
      }
      topic.pick = std::discrete_distribution<std::size_t>(w.begin(), w.end());
      topics_.push_back(std::move(topic));
    }
  }

  SparseVector sample(std::size_t mean_nnz) {
    std::uniform_int_distribution<std::size_t> nnz_dist(mean_nnz * 2 / 3, mean_nnz * 4 / 3);
    std::uniform_int_distribution<std::size_t> topic_dist(0, topics_.size() - 1);
    std::bernoulli_distribution second_topic(0.3);
    std::bernoulli_distribution from_topic(cfg_.topic_fraction);
    std::lognormal_distribution<double> noise(-0.5, 1.1);

    const std::size_t nnz = std::max<std::size_t>(1, nnz_dist(rng_));
    std::vector<std::size_t> mine = {topic_dist(rng_)};
    if (second_topic(rng_)) {
      mine.push_back(topic_dist(rng_));
    }
    std::unordered_map<TermId, float> entries;
    std::size_t attempts = 0;
    while (entries.size() < nnz && attempts < nnz * 50) {
      ++attempts;
      TermId term;
      double scale;
      if (from_topic(rng_)) {
        Topic& topic = topics_[mine[attempts % mine.size()]];
        const std::size_t i = topic.pick(rng_);
        term = topic.terms[i];
        scale = 1.0 + topic.affinity[i];
      } else {
        term = static_cast<TermId>(global_(rng_));
        scale = 0.3;
      }
      // heavy-tailed: a few coordinates carry most of the mass
      const double w = std::min(scale * noise(rng_), 8.0);
      auto [it, inserted] = entries.emplace(term, static_cast<float>(w));
      if (!inserted) {
        it->second = std::max(it->second, static_cast<float>(w));
      }
    }
    std::vector<std::pair<TermId, float>> pairs;
    pairs.reserve(entries.size());
    for (const auto& [term, w] : entries) {
      pairs.emplace_back(term, std::max(w, 1e-3f));
    }
    return SparseVector::from_unsorted(std::move(pairs));
  }

 private:
  SyntheticConfig cfg_;
  std::mt19937_64 rng_;
  std::discrete_distribution<std::size_t> global_;
  std::vector<Topic> topics_;
};

}  // namespace

SyntheticData generate_synthetic(const SyntheticConfig& config) {
  if (config.dim == 0 || config.num_topics == 0 || config.topic_terms == 0 ||
      config.topic_terms > config.dim) {
    throw std::invalid_argument("invalid synthetic corpus configuration");
  }
  Generator gen(config);
  SyntheticData data;
  data.docs.reserve(config.num_docs);
  for (std::size_t i = 0; i < config.num_docs; ++i) {
    data.docs.push_back(gen.sample(config.doc_nnz));
  }
  data.queries.reserve(config.num_queries);
  for (std::size_t i = 0; i < config.num_queries; ++i) {
    data.queries.push_back(gen.sample(config.query_nnz));
  }
  return data;
}

}  // namespace seismicwave
