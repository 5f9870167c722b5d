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

#include "seismicwave/sparse_vector.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace seismicwave {

std::optional<std::string> SparseVector::check(std::span<const TermId> ids,
                                               std::span<const float> weights) {
  if (ids.size() != weights.size()) {
    return "ids and weights differ in length";
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0 && ids[i] <= ids[i - 1]) {
      return "ids not strictly increasing at position " + std::to_string(i);
    }
    if (!std::isfinite(weights[i])) {
      return "non-finite weight at position " + std::to_string(i);
    }
    if (weights[i] == 0.0f) {
      return "zero weight stored at position " + std::to_string(i);
    }
  }
  return std::nullopt;
}

SparseVector::SparseVector(std::vector<TermId> ids, std::vector<float> weights)
    : ids_(std::move(ids)), weights_(std::move(weights)) {
  if (auto err = check(ids_, weights_)) {
    throw std::invalid_argument("invalid sparse vector: " + *err);
  }
}

SparseVector::SparseVector(std::initializer_list<std::pair<TermId, float>> entries) {
  ids_.reserve(entries.size());
  weights_.reserve(entries.size());
  for (const auto& [id, w] : entries) {
    ids_.push_back(id);
    weights_.push_back(w);
  }
  if (auto err = check(ids_, weights_)) {
    throw std::invalid_argument("invalid sparse vector: " + *err);
  }
}

SparseVector SparseVector::from_unsorted(std::vector<std::pair<TermId, float>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<TermId> ids;
  std::vector<float> weights;
  ids.reserve(entries.size());
  weights.reserve(entries.size());
  for (const auto& [id, w] : entries) {
    if (!ids.empty() && ids.back() == id) {
      throw std::invalid_argument("duplicate term id " + std::to_string(id));
    }
    if (w == 0.0f) {
      continue;
    }
    ids.push_back(id);
    weights.push_back(w);
  }
  return SparseVector(std::move(ids), std::move(weights));
}

float SparseVector::at(TermId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    return 0.0f;
  }
  return weights_[static_cast<std::size_t>(it - ids_.begin())];
}

float dot(const SparseVector& u, const SparseVector& v) {
  const auto uid = u.ids();
  const auto vid = v.ids();
  const auto uw = u.weights();
  const auto vw = v.weights();
  float sum = 0.0f;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < uid.size() && j < vid.size()) {
    if (uid[i] < vid[j]) {
      ++i;
    } else if (uid[i] > vid[j]) {
      ++j;
    } else {
      sum += uw[i] * vw[j];
      ++i;
      ++j;
    }
  }
  return sum;
}

std::vector<TermId> query_coordinates(const SparseVector& q) {
  std::vector<std::size_t> order(q.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto w = q.weights();
  // ids are already ascending, so a stable sort on weight keeps id order on ties
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  std::vector<TermId> out;
  out.reserve(order.size());
  for (std::size_t pos : order) {
    out.push_back(q.ids()[pos]);
  }
  return out;
}

void DenseQuery::assign(const SparseVector& q) {
  for (TermId id : touched_) {
    dense_[id] = 0.0f;
  }
  touched_.clear();
  if (!q.empty() && dense_.size() <= q.ids().back()) {
    dense_.resize(static_cast<std::size_t>(q.ids().back()) + 1, 0.0f);
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    dense_[q.ids()[i]] = q.weights()[i];
    touched_.push_back(q.ids()[i]);
  }
}

float DenseQuery::dot(const SparseVector& v) const {
  const auto ids = v.ids();
  const auto w = v.weights();
  const std::size_t limit = dense_.size();
  float sum = 0.0f;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= limit) {
      break;
    }
    sum += dense_[ids[i]] * w[i];
  }
  return sum;
}

}  // namespace seismicwave
