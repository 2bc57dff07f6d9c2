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

// Synthetic datasets, Iris ingestion, splitting, and dataset CSV files.

#pragma once

#include "qrobust/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <cctype>
#include <iomanip>
#include <limits>
#include <locale>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qrobust {

enum class SyntheticKind { Vertical, Diagonal, Moons };

inline std::string_view to_string(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::Vertical: return "vertical";
    case SyntheticKind::Diagonal: return "diagonal";
    case SyntheticKind::Moons: return "moons";
  }
  return "unknown";
}

inline SyntheticKind synthetic_kind_from_string(std::string_view s) {
  if (s == "vertical") return SyntheticKind::Vertical;
  if (s == "diagonal") return SyntheticKind::Diagonal;
  if (s == "moons") return SyntheticKind::Moons;
  throw std::invalid_argument("unknown synthetic dataset '" + std::string(s) + "'");
}

/// Label 1 iff x1 >= 0.5.
inline int vertical_label(double x1) { return x1 >= 0.5 ? 1 : 0; }
/// Label 1 iff x2 >= x1.
inline int diagonal_label(double x1, double x2) { return x2 >= x1 ? 1 : 0; }

/// Per-coordinate min-max scaling into [0, 1]; constant columns map to 0.
inline void minmax_normalize(std::vector<FeatureVector>& points) {
  if (points.empty()) return;
  const std::size_t n = points.front().size();
  for (std::size_t j = 0; j < n; ++j) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : points) {
      lo = std::min(lo, p[j]);
      hi = std::max(hi, p[j]);
    }
    const double span = hi - lo;
    for (auto& p : points) p[j] = span > 0.0 ? (p[j] - lo) / span : 0.0;
  }
}

/// Two interleaving half circles before rotation and scaling.
/// Outer arc (label 0): (cos t, sin t); inner arc (label 1): (1 - cos t, 1/2 - sin t).
inline std::pair<std::vector<FeatureVector>, std::vector<int>> raw_moons(std::size_t n_points) {
  const std::size_t n_outer = n_points / 2;
  const std::size_t n_inner = n_points - n_outer;
  std::vector<FeatureVector> pts;
  std::vector<int> labels;
  auto t_at = [](std::size_t i, std::size_t count) {
    return count > 1 ? kPi * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
  };
  for (std::size_t i = 0; i < n_outer; ++i) {
    const double t = t_at(i, n_outer);
    pts.push_back({std::cos(t), std::sin(t)});
    labels.push_back(0);
  }
  for (std::size_t i = 0; i < n_inner; ++i) {
    const double t = t_at(i, n_inner);
    pts.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
    labels.push_back(1);
  }
  return {std::move(pts), std::move(labels)};
}

inline Dataset gen_synthetic(SyntheticKind kind, std::size_t n_points, double noise_level = 0.05,
                             std::uint64_t seed = 0) {
  if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");
  if (!(noise_level >= 0.0)) throw std::invalid_argument("noise_level must be >= 0");
  std::mt19937_64 rng(seed);
  Dataset ds;
  ds.name = std::string(to_string(kind));
  ds.split_seed = seed;
  if (kind == SyntheticKind::Moons) {
    auto [pts, labels] = raw_moons(n_points);
    std::normal_distribution<double> gauss(0.0, noise_level > 0.0 ? noise_level : 1.0);
    for (auto& p : pts) {
      if (noise_level > 0.0) {
        p[0] += gauss(rng);
        p[1] += gauss(rng);
      }
      p = {-p[1], p[0]};  // rotate by 90 degrees
    }
    minmax_normalize(pts);
    ds.points = std::move(pts);
    ds.labels = std::move(labels);
    return ds;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x1 = u(rng), x2 = u(rng);
    ds.push_back({x1, x2}, kind == SyntheticKind::Vertical ? vertical_label(x1) : diagonal_label(x1, x2));
  }
  return ds;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  is >> out;
  return !is.fail() && is.eof();
}

/// Iris class id from a name ("Iris-setosa", "setosa", ...) or a number.
inline int iris_class_id(const std::string& s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower.rfind("iris-", 0) == 0) lower = lower.substr(5);
  if (lower == "setosa") return 0;
  if (lower == "versicolor") return 1;
  if (lower == "virginica") return 2;
  double v = 0.0;
  if (parse_double(s, v) && v == std::floor(v) && v >= 0.0 && v <= 2.0) return static_cast<int>(v);
  throw std::invalid_argument("unrecognized Iris class '" + s + "'");
}

}  // namespace detail

/// Reads a 5-column Iris CSV (4 numeric features, class), keeps the two
/// requested classes (first -> label 0) and min-max scales each feature.
inline Dataset load_iris(const std::string& path, std::pair<int, int> classes = {0, 2}) {
  if (classes.first == classes.second || classes.first < 0 || classes.first > 2 || classes.second < 0 ||
      classes.second > 2)
    throw std::invalid_argument("Iris class pair must be two distinct ids in {0, 1, 2}");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Iris file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  Dataset ds;
  ds.name = "iris";
  std::array<std::size_t, 2> counts{0, 0};
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 5)
      throw std::invalid_argument("Iris CSV line " + std::to_string(line_no) + ": expected 5 columns, got " +
                                  std::to_string(fields.size()));
    FeatureVector x(4);
    bool numeric = true;
    for (std::size_t j = 0; j < 4; ++j) numeric = numeric && detail::parse_double(fields[j], x[j]);
    if (!numeric) {
      if (line_no == 1 && ds.empty()) continue;  // header
      throw std::invalid_argument("Iris CSV line " + std::to_string(line_no) + ": non-numeric feature");
    }
    const int cls = detail::iris_class_id(fields[4]);
    if (cls == classes.first) {
      ds.push_back(std::move(x), 0);
      ++counts[0];
    } else if (cls == classes.second) {
      ds.push_back(std::move(x), 1);
      ++counts[1];
    }
  }
  if (counts[0] == 0 || counts[1] == 0) throw std::invalid_argument("Iris CSV: a requested class is missing");
  minmax_normalize(ds.points);
  return ds;
}

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw std::invalid_argument("split.train_fraction must lie in (0, 1)");
  }
};

/// Seeded, label-stratified train/test partition.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> train_idx, test_idx;
  const std::size_t n_train_total =
      static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(ds.size())));
  std::size_t assigned = 0;
  for (int label : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds.labels[i] == label) idx.push_back(i);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t k = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(idx.size())));
    if (label == 1) k = std::min(idx.size(), n_train_total > assigned ? n_train_total - assigned : 0);
    assigned += k;
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    test_idx.insert(test_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  }
  if (train_idx.empty() || test_idx.empty()) throw std::invalid_argument("split produces an empty side");
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  Dataset train = ds.subset(train_idx), test = ds.subset(test_idx);
  train.split_seed = test.split_seed = cfg.seed;
  return {std::move(train), std::move(test)};
}

// --- Dataset CSV (header x1,...,xN,label; 17 significant digits) --------------

inline void write_dataset_csv(std::ostream& os, const Dataset& ds) {
  const std::size_t n = ds.n_features();
  for (std::size_t j = 0; j < n; ++j) os << 'x' << (j + 1) << ',';
  os << "label\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.points[i]) os << v << ',';
    os << ds.labels[i] << '\n';
  }
}

inline void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  write_dataset_csv(os, ds);
}

inline Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset CSV is empty");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 2 || header.back() != "label")
    throw std::invalid_argument("dataset CSV header must be x1,...,xN,label");
  const std::size_t n = header.size() - 1;
  Dataset ds;
  ds.name = path;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != n + 1) throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) + ": wrong column count");
    FeatureVector x(n);
    for (std::size_t j = 0; j < n; ++j)
      if (!detail::parse_double(f[j], x[j]))
        throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) + ": bad number");
    double y = 0.0;
    if (!detail::parse_double(f[n], y) || (y != 0.0 && y != 1.0))
      throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) + ": label must be 0 or 1");
    ds.push_back(std::move(x), static_cast<int>(y));
  }
  ds.validate();
  return ds;
}

}  // namespace qrobust
