// Copyright 2026 The qrobust Authors
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

#include "qrobust/encodings.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrobust {

/// Labeled points {(x_i, y_i)}, y_i in {0, 1}.
struct Dataset {
  std::vector<FeatureVector> points;
  std::vector<int> labels;
  std::string name;
  std::uint64_t split_seed = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::size_t n_features() const { return points.empty() ? 0 : points.front().size(); }

  void push_back(FeatureVector x, int y) {
    points.push_back(std::move(x));
    labels.push_back(y);
  }

  void validate() const {
    if (points.size() != labels.size()) throw std::invalid_argument("dataset: points and labels differ in length");
    const std::size_t n = n_features();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != n) throw std::invalid_argument("dataset: ragged feature vectors");
      if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("dataset: labels must be 0 or 1");
      for (double v : points[i])
        if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite feature");
    }
  }

  Dataset subset(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.name = name;
    out.split_seed = split_seed;
    out.points.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(points.at(i), labels.at(i));
    return out;
  }
};

}  // namespace qrobust
