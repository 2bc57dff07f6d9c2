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

// Ansatz parameter optimization.

#pragma once

#include "qrobust/classifier.hpp"
#include "qrobust/optimize.hpp"
#include "qrobust/parallel.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace qrobust {

enum class OptimizerKind { NelderMead, FiniteDifferenceGradient };
enum class InitKind { Zeros, SeededUniform };
enum class CostKind { Indicator, Embedded };

inline std::string_view to_string(OptimizerKind k) {
  return k == OptimizerKind::NelderMead ? "nelder_mead" : "finite_difference_gradient";
}
inline std::string_view to_string(InitKind k) { return k == InitKind::Zeros ? "zeros" : "seeded_uniform"; }
inline std::string_view to_string(CostKind k) { return k == CostKind::Indicator ? "indicator" : "embedded"; }

inline OptimizerKind optimizer_from_string(std::string_view s) {
  if (s == "nelder_mead") return OptimizerKind::NelderMead;
  if (s == "finite_difference_gradient") return OptimizerKind::FiniteDifferenceGradient;
  throw std::invalid_argument("unknown optimizer '" + std::string(s) + "'");
}
inline InitKind init_from_string(std::string_view s) {
  if (s == "zeros") return InitKind::Zeros;
  if (s == "seeded_uniform") return InitKind::SeededUniform;
  throw std::invalid_argument("unknown init '" + std::string(s) + "'");
}
inline CostKind cost_from_string(std::string_view s) {
  if (s == "indicator") return CostKind::Indicator;
  if (s == "embedded") return CostKind::Embedded;
  throw std::invalid_argument("unknown cost '" + std::string(s) + "'");
}

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::NelderMead;
  std::size_t max_iters = 500;
  std::size_t restarts = 10;
  InitKind init = InitKind::SeededUniform;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  double initial_step = 0.5;
  double learning_rate = 0.1;
  std::size_t workers = 1;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("train.max_iters must be >= 1");
    if (restarts < 1) throw std::invalid_argument("train.restarts must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("train.tolerance must be > 0");
    if (!(initial_step > 0.0)) throw std::invalid_argument("train.initial_step must be > 0");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train.learning_rate must be > 0");
  }

  OptimizeOptions options() const {
    OptimizeOptions o;
    o.max_iters = max_iters;
    o.tolerance = tolerance;
    o.initial_step = initial_step;
    o.learning_rate = learning_rate;
    return o;
  }
};

struct HistoryEntry {
  std::size_t iteration = 0;
  double cost = 0.0;
};

struct TrainResult {
  AnsatzParams best_params;
  double best_cost = 0.0;
  std::vector<HistoryEntry> history;
  std::size_t restart_index = 0;
  std::vector<double> restart_costs;
};

/// Random stream for one restart, derived from (seed, restart).
inline std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

/// Called with the noise placement each time a dataset cost is evaluated.
using CostObserver = std::function<void(const NoisePlacement&)>;

/// Dataset cost as a function of the ansatz angles, with encodings cached.
class AnsatzObjective {
 public:
  AnsatzObjective(const ClassifierModel& model, const Dataset& data, CostKind kind, const NoisePlacement& noise,
                  CostObserver observer = {})
      : model_(model), labels_(data.labels), kind_(kind), noise_(noise), observer_(std::move(observer)) {
    if (data.empty()) throw std::invalid_argument("training dataset is empty");
    data.validate();
    model.validate(data.n_features());
    states_.reserve(data.size());
    for (const auto& x : data.points) states_.push_back(encode_state(x, model.encoding));
  }

  std::vector<double> scores(const std::vector<double>& alpha) const {
    if (observer_) observer_(noise_);
    CompiledModel cm(model_.with_params(AnsatzParams{alpha}), noise_);
    std::vector<double> s;
    s.reserve(states_.size());
    for (const auto& psi : states_) s.push_back(cm.score_state(psi));
    return s;
  }

  double operator()(const std::vector<double>& alpha) const {
    const auto s = scores(alpha);
    if (kind_ == CostKind::Indicator) return indicator_from_scores(s, labels_, model_.rule);
    return 0.5 * (1.0 - embedded_trace_from_scores(s, labels_));
  }

 private:
  ClassifierModel model_;
  std::vector<int> labels_;
  CostKind kind_;
  NoisePlacement noise_;
  CostObserver observer_;
  std::vector<PureState> states_;
};

/// Minimizes the chosen cost over ansatz angles; the input model is not
/// modified. Embedded cost means the rescaled error (1 - Tr[D sigma~]) / 2.
inline TrainResult train(const ClassifierModel& model, const Dataset& data, CostKind cost_kind,
                         const NoisePlacement& noise, const TrainConfig& cfg, const CostObserver& observer = {}) {
  cfg.validate();
  if (cost_kind == CostKind::Indicator && cfg.optimizer != OptimizerKind::NelderMead)
    throw std::invalid_argument("indicator cost is not differentiable; use nelder_mead");
  const AnsatzObjective objective(model, data, cost_kind, noise, observer);
  const std::size_t n_params = AnsatzParams::count_for(model.n_qubits());

  auto run_restart = [&](std::size_t r) {
    std::vector<double> x0(n_params, 0.0);
    if (!(cfg.init == InitKind::Zeros && r == 0)) {
      auto rng = restart_rng(cfg.seed, r);
      std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
      for (auto& v : x0) v = u(rng);
    }
    const Objective f = [&objective](const std::vector<double>& a) { return objective(a); };
    return cfg.optimizer == OptimizerKind::NelderMead ? nelder_mead(f, x0, cfg.options())
                                                      : gradient_descent(f, x0, cfg.options());
  };
  const auto runs = parallel_map(cfg.restarts, cfg.workers, run_restart);

  TrainResult result;
  result.best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    result.restart_costs.push_back(runs[r].value);
    if (runs[r].value < result.best_cost) {
      result.best_cost = runs[r].value;
      result.restart_index = r;
    }
  }
  const auto& best = runs[result.restart_index];
  result.best_params = AnsatzParams{best.x};
  for (std::size_t i = 0; i < best.history.size(); ++i) result.history.push_back({i, best.history[i]});
  return result;
}

struct PointRecord {
  int label_true = 0;
  int label_pred = 0;
  double score = 0.0;
};

struct EvalResult {
  double accuracy = 0.0;
  double cost = 0.0;  // indicator cost
  double embedded_rescaled = 0.0;
  std::vector<PointRecord> per_point;
};

inline EvalResult evaluate(const ClassifierModel& model, const AnsatzParams& params, const Dataset& data,
                           const NoisePlacement& noise = {}) {
  const ClassifierModel m = model.with_params(params);
  const auto scores = dataset_scores(m, data, noise);
  EvalResult out;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int pred = m.rule.label(scores[i]);
    if (pred != data.labels[i]) ++wrong;
    out.per_point.push_back({data.labels[i], pred, scores[i]});
  }
  const auto m_size = static_cast<double>(data.size());
  out.cost = static_cast<double>(wrong) / m_size;
  out.accuracy = 1.0 - out.cost;
  out.embedded_rescaled = 0.5 * (1.0 - embedded_trace_from_scores(scores, data.labels));
  return out;
}

}  // namespace qrobust
