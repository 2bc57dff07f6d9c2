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

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qrobust;
namespace fs = std::filesystem;

namespace {

const std::string kIris = std::string(QROBUST_DATA_DIR) + "/iris.csv";

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path p = fs::temp_directory_path() / ("qrobust_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

std::size_t count_label(const Dataset& d, int y) {
  return static_cast<std::size_t>(std::count(d.labels.begin(), d.labels.end(), y));
}

}  // namespace

TEST_CASE("synthetic label rules", "[test_data]") {
  CHECK(vertical_label(0.9) == 1);
  CHECK(vertical_label(0.5) == 1);
  CHECK(vertical_label(0.2) == 0);
  CHECK(diagonal_label(0.3, 0.3) == 1);
  CHECK(diagonal_label(0.4, 0.3) == 0);

  for (auto kind : {SyntheticKind::Vertical, SyntheticKind::Diagonal}) {
    const auto d = gen_synthetic(kind, 300, 0.0, 8);
    CHECK(d.size() == 300);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto& x = d.points[i];
      CHECK(x[0] >= 0.0);
      CHECK(x[0] < 1.0);
      CHECK(d.labels[i] == (kind == SyntheticKind::Vertical ? vertical_label(x[0]) : diagonal_label(x[0], x[1])));
    }
  }
}

TEST_CASE("noise-free moons lie on two arcs", "[test_data]") {
  const auto d = gen_synthetic(SyntheticKind::Moons, 202, 0.0, 1);  // odd arc size hits t = pi/2
  // undo the min-max scaling of the rotated arcs: x in [-1, 1/2], y in [-1, 2]
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double X = -1.0 + 1.5 * d.points[i][0];
    const double Y = -1.0 + 3.0 * d.points[i][1];
    const double r = d.labels[i] == 0 ? std::hypot(X, Y) : std::hypot(X + 0.5, Y - 1.0);
    CHECK(std::abs(r - 1.0) < 1e-12);
  }
  CHECK(count_label(d, 0) == 101);
}

TEST_CASE("synthetic generation is deterministic and normalized", "[test_data]") {
  for (auto kind : {SyntheticKind::Vertical, SyntheticKind::Diagonal, SyntheticKind::Moons}) {
    const auto a = gen_synthetic(kind, 150, 0.05, 42), b = gen_synthetic(kind, 150, 0.05, 42);
    CHECK(a.points == b.points);
    CHECK(a.labels == b.labels);
    const auto c = gen_synthetic(kind, 150, 0.05, 43);
    CHECK(a.points != c.points);
  }
  const auto m = gen_synthetic(SyntheticKind::Moons, 150, 0.1, 3);
  for (std::size_t j = 0; j < 2; ++j) {
    double lo = 1.0, hi = 0.0;
    for (const auto& p : m.points) lo = std::min(lo, p[j]), hi = std::max(hi, p[j]);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }
  CHECK_THROWS_AS(gen_synthetic(SyntheticKind::Vertical, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic(SyntheticKind::Moons, 10, -1.0), std::invalid_argument);
}

TEST_CASE("Iris loading", "[test_data]") {
  const auto d = load_iris(kIris);
  CHECK(d.size() == 100);
  CHECK(d.n_features() == 4);
  CHECK(count_label(d, 0) == 50);
  CHECK(count_label(d, 1) == 50);
  for (std::size_t j = 0; j < 4; ++j) {
    double lo = 1.0, hi = 0.0;
    for (const auto& p : d.points) lo = std::min(lo, p[j]), hi = std::max(hi, p[j]);
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }
  const auto d01 = load_iris(kIris, {0, 1});
  CHECK(d01.size() == 100);
  CHECK(d01.points != d.points);

  CHECK_THROWS_AS(load_iris(temp_file("bad_cols.csv", "1,2,3,Iris-setosa\n").string()), std::invalid_argument);
  CHECK_THROWS_AS(load_iris(temp_file("bad_num.csv", "a,b,c,d,e\n1,2,x,4,Iris-setosa\n").string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_iris(temp_file("one_class.csv", "5.1,3.5,1.4,0.2,Iris-setosa\n").string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(load_iris(kIris, {1, 1}), std::invalid_argument);
  CHECK_THROWS(load_iris("/nonexistent/iris.csv"));
}

TEST_CASE("stratified split", "[test_data]") {
  const auto d = gen_synthetic(SyntheticKind::Vertical, 500, 0.0, 0);
  const auto [tr, te] = split(d, SplitConfig{0.8, 9});
  CHECK(tr.size() == 400);
  CHECK(te.size() == 100);
  const auto [tr2, te2] = split(d, SplitConfig{0.8, 9});
  CHECK(tr.points == tr2.points);
  CHECK(te.labels == te2.labels);
  const double global = static_cast<double>(count_label(d, 1)) / 500.0;
  CHECK(std::abs(static_cast<double>(count_label(tr, 1)) - global * 400.0) <= 1.0);

  oracle::Gen g(60);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 10 + g.index(200);
    const auto ds = gen_synthetic(SyntheticKind::Diagonal, n, 0.0, t);
    const double f = g.uniform(0.2, 0.9);
    try {
      const auto [a, b] = split(ds, SplitConfig{f, static_cast<std::uint64_t>(t)});
      CHECK(a.size() + b.size() == n);
      const double expect = f * static_cast<double>(count_label(ds, 1));
      CHECK(std::abs(static_cast<double>(count_label(a, 1)) - expect) <= 1.0 + 1e-9);
    } catch (const std::invalid_argument&) {
      // degenerate split on a tiny set
    }
  }
  CHECK_THROWS_AS(split(d, SplitConfig{1.0, 0}), std::invalid_argument);
  Dataset tiny;
  tiny.push_back({0.1, 0.1}, 0);
  tiny.push_back({0.9, 0.1}, 1);
  CHECK_THROWS_AS(split(tiny, SplitConfig{0.9, 0}), std::invalid_argument);
}

TEST_CASE("dataset CSV round trip is bit-stable", "[test_data]") {
  const auto d = gen_synthetic(SyntheticKind::Moons, 64, 0.05, 5);
  const auto p = fs::temp_directory_path() / "qrobust_test_roundtrip.csv";
  write_dataset_csv(p.string(), d);
  const auto r = read_dataset_csv(p.string());
  CHECK(r.points == d.points);
  CHECK(r.labels == d.labels);
  std::ostringstream a, b;
  write_dataset_csv(a, d);
  write_dataset_csv(b, r);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("x1,x2,label\n", 0) == 0);

  CHECK_THROWS_AS(read_dataset_csv(temp_file("hdr.csv", "a,b\n1,0\n").string()), std::invalid_argument);
  CHECK_THROWS_AS(read_dataset_csv(temp_file("lbl.csv", "x1,label\n0.5,2\n").string()), std::invalid_argument);
}
