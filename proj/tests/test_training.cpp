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

#include <atomic>

using namespace qrobust;

namespace {

ClassifierModel model_for(EncodingSpec enc, std::size_t n_qubits) {
  ClassifierModel m;
  m.encoding = std::move(enc);
  m.ansatz = AnsatzParams::zeros(n_qubits);
  return m;
}

}  // namespace

TEST_CASE("Nelder-Mead and gradient descent minimize smooth functions", "[test_training]") {
  const Objective quad = [](const std::vector<double>& x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5) + 3.0;
  };
  OptimizeOptions opt;
  opt.max_iters = 2000;
  opt.tolerance = 1e-12;
  const auto nm = nelder_mead(quad, {4.0, 4.0}, opt);
  CHECK(nm.x[0] == Catch::Approx(1.0).margin(1e-4));
  CHECK(nm.x[1] == Catch::Approx(-0.5).margin(1e-4));
  CHECK(nm.value == Catch::Approx(3.0).margin(1e-8));

  const Objective rosen = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, opt);
  CHECK(r.x[0] == Catch::Approx(1.0).margin(1e-3));

  opt.learning_rate = 0.1;
  const auto gd = gradient_descent(quad, {4.0, 4.0}, opt);
  CHECK(gd.x[0] == Catch::Approx(1.0).margin(1e-4));
  CHECK(gd.x[1] == Catch::Approx(-0.5).margin(1e-4));

  for (const auto* res : {&nm, &r, &gd}) {
    REQUIRE(!res->history.empty());
    for (std::size_t i = 1; i < res->history.size(); ++i) CHECK(res->history[i] <= res->history[i - 1]);
  }
}

TEST_CASE("parallel_map keeps index order and propagates errors", "[test_training]") {
  for (std::size_t w : {1u, 2u, 5u}) {
    const auto out = parallel_map(17, w, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  }
  CHECK_THROWS_AS(parallel_map(8, 3,
                               [](std::size_t i) {
                                 if (i == 5) throw std::runtime_error("boom");
                                 return 0;
                               }),
                  std::runtime_error);
}

TEST_CASE("training is deterministic and history is monotone", "[test_training]") {
  const auto data = gen_synthetic(SyntheticKind::Vertical, 80, 0.0, 3);
  const auto m = model_for(EncodingSpec::dense_angle(kPi / 2, 2 * kPi), 1);
  TrainConfig cfg;
  cfg.restarts = 3;
  cfg.max_iters = 150;
  cfg.seed = 11;
  const auto a = train(m, data, CostKind::Embedded, {}, cfg);
  const auto b = train(m, data, CostKind::Embedded, {}, cfg);
  CHECK(a.best_params.alpha == b.best_params.alpha);
  CHECK(a.best_cost == b.best_cost);
  CHECK(a.restart_costs == b.restart_costs);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 1; i < a.history.size(); ++i) CHECK(a.history[i].cost <= a.history[i - 1].cost);
  CHECK(a.best_cost == *std::min_element(a.restart_costs.begin(), a.restart_costs.end()));

  cfg.workers = 3;
  const auto c = train(m, data, CostKind::Embedded, {}, cfg);
  CHECK(c.best_params.alpha == a.best_params.alpha);
}

TEST_CASE("already-optimal initialization", "[test_training]") {
  // U = I classifies x1 < 0.25 as 0 and x1 > 0.25 as 1 under DAE(pi, 2 pi)
  Dataset d;
  for (double x1 : {0.05, 0.1, 0.15}) d.push_back({x1, 0.5}, 0);
  for (double x1 : {0.35, 0.4, 0.45}) d.push_back({x1, 0.5}, 1);
  TrainConfig cfg;
  cfg.init = InitKind::Zeros;
  cfg.restarts = 1;
  const auto r = train(model_for(EncodingSpec::dense_angle(), 1), d, CostKind::Indicator, {}, cfg);
  REQUIRE(!r.history.empty());
  CHECK(r.history.front().iteration == 0);
  CHECK(r.history.front().cost == 0.0);
  CHECK(r.best_cost == 0.0);
}

TEST_CASE("embedded and rescaled costs share an argmin", "[test_training][property]") {
  oracle::Gen g(40);
  const auto data = gen_synthetic(SyntheticKind::Moons, 60, 0.05, 2);
  const auto m = model_for(EncodingSpec::dense_angle(), 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<AnsatzParams> candidates;
    for (int k = 0; k < 15; ++k) candidates.push_back(g.ansatz(1));
    std::size_t best_trace = 0, best_rescaled = 0;
    double max_trace = -2.0, min_rescaled = 2.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const auto c = cost_embedded(m.with_params(candidates[k]), data);
      if (c.trace > max_trace) max_trace = c.trace, best_trace = k;
      if (c.rescaled_error < min_rescaled) min_rescaled = c.rescaled_error, best_rescaled = k;
    }
    CHECK(best_trace == best_rescaled);
  }
}

TEST_CASE("training reaches the expected accuracy on synthetic sets", "[test_training]") {
  SplitConfig sc;
  sc.seed = 0;
  TrainConfig cfg;
  cfg.restarts = 10;
  cfg.seed = 0;

  const auto vertical = gen_synthetic(SyntheticKind::Vertical, 500, 0.0, 0);
  const auto [vtr, vte] = split(vertical, sc);
  const auto dae = model_for(EncodingSpec::dense_angle(kPi / 2, 2 * kPi), 1);
  const auto rv = train(dae, vtr, CostKind::Embedded, {}, cfg);
  CHECK(evaluate(dae, rv.best_params, vte).accuracy >= 0.95);

  const auto diagonal = gen_synthetic(SyntheticKind::Diagonal, 500, 0.0, 0);
  const auto [dtr, dte] = split(diagonal, sc);
  const auto wf = model_for(EncodingSpec::wavefunction(), 1);
  const auto rd = train(wf, dtr, CostKind::Embedded, {}, cfg);
  CHECK(evaluate(wf, rd.best_params, dte).accuracy >= 0.75);
}

TEST_CASE("training observer sees the configured noise", "[test_training]") {
  const auto data = gen_synthetic(SyntheticKind::Vertical, 40, 0.0, 1);
  const auto m = model_for(EncodingSpec::dense_angle(), 1);
  TrainConfig cfg;
  cfg.restarts = 1;
  cfg.max_iters = 20;
  std::atomic<int> with_noise{0}, without{0};
  train(m, data, CostKind::Embedded, NoisePlacement::after_evolution_only(bit_flip(0.1)), cfg,
        [&](const NoisePlacement& n) { (n.empty() ? without : with_noise)++; });
  CHECK(with_noise > 0);
  CHECK(without == 0);
}

TEST_CASE("evaluate", "[test_training]") {
  const auto m = model_for(EncodingSpec::dense_angle(), 1);
  Dataset constant;
  for (int i = 0; i < 10; ++i) constant.push_back({0.0, 0.1 * i}, i % 2);
  const auto e = evaluate(m, m.ansatz, constant);
  CHECK(e.accuracy == 0.5);
  CHECK(e.accuracy + e.cost == 1.0);

  Dataset perfect;
  for (int i = 0; i < 10; ++i) perfect.push_back({0.0, 0.1 * i}, 0);
  CHECK(evaluate(m, m.ansatz, perfect).accuracy == 1.0);

  oracle::Gen g(41);
  const auto data = gen_synthetic(SyntheticKind::Moons, 50, 0.05, 4);
  for (int t = 0; t < 50; ++t) {
    const auto r = evaluate(m, g.ansatz(1), data);
    CHECK(r.accuracy + r.cost == 1.0);
    CHECK(r.per_point.size() == data.size());
  }
}

TEST_CASE("training config errors", "[test_training]") {
  const auto data = gen_synthetic(SyntheticKind::Vertical, 20, 0.0, 1);
  const auto m = model_for(EncodingSpec::dense_angle(), 1);
  TrainConfig cfg;
  cfg.optimizer = OptimizerKind::FiniteDifferenceGradient;
  CHECK_THROWS_AS(train(m, data, CostKind::Indicator, {}, cfg), std::invalid_argument);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(train(m, data, CostKind::Embedded, {}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(train(m, Dataset{}, CostKind::Embedded, {}, TrainConfig{}), std::invalid_argument);
  CHECK(cost_from_string("indicator") == CostKind::Indicator);
  CHECK_THROWS(optimizer_from_string("adam"));
}
