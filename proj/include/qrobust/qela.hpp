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

// Encoding learning: train the ansatz without noise, then tune the encoding
// hyperparameters under noise with the ansatz held fixed.

#pragma once

#include "qrobust/robustness.hpp"
#include "qrobust/training.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <numeric>
#include <random>
#include <vector>

namespace qrobust {

struct HyperBounds {
  double lo = 0.0;
  double hi = 2.0 * kPi;
};

/// Maps v into the half-open interval (lo, hi] by periodic wrapping.
inline double wrap_into(double v, const HyperBounds& b) {
  const double w = b.hi - b.lo;
  double r = std::fmod(v - b.lo, w);
  if (r <= 0.0) r += w;
  return b.lo + r;
}

struct EncodingFamilyTemplate {
  EncodingSpec spec;                 // hyperparams used as the initial guess
  std::vector<HyperBounds> bounds;   // one per hyperparameter; empty means (0, 2 pi]
  bool random_init = false;          // draw the initial guess uniformly in bounds

  HyperBounds bound(std::size_t i) const { return i < bounds.size() ? bounds[i] : HyperBounds{}; }
};

struct EncodingFamilySet {
  std::vector<EncodingFamilyTemplate> families;

  void validate() const {
    if (families.empty()) throw std::invalid_argument("QELA needs at least one encoding family");
    for (const auto& f : families) {
      f.spec.check();
      for (const auto& b : f.bounds)
        if (!(b.lo < b.hi)) throw std::invalid_argument("QELA hyperparameter bounds must satisfy lo < hi");
    }
  }
};

enum class QelaPhase { Alpha, Theta };

struct QelaConfig {
  std::size_t subset_size = 0;  // 0 means the full dataset
  NoisePlacement noise;
  TrainConfig alpha_cfg;
  CostKind alpha_cost = CostKind::Embedded;
  TrainConfig theta_cfg;
  CostKind theta_cost = CostKind::Indicator;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Invoked on every dataset-cost evaluation with the phase and the noise seen.
  std::function<void(QelaPhase, const NoisePlacement&)> observer;

  QelaConfig() {
    theta_cfg.restarts = 1;
    theta_cfg.max_iters = 200;
    theta_cfg.initial_step = 0.3;
  }
};

struct QelaFamilyResult {
  EncodingSpec initial;
  EncodingSpec tuned;
  AnsatzParams alpha;
  double noiseless_cost = 0.0;     // indicator, initial hyperparameters, no noise
  double noisy_fixed_cost = 0.0;   // indicator, initial hyperparameters, with noise
  double post_cost = 0.0;          // indicator, tuned hyperparameters, with noise
  std::vector<std::size_t> subset;
};

struct QelaResult {
  double best_cost = 0.0;
  AnsatzParams best_alpha;
  std::size_t best_family = 0;
  std::vector<double> best_hyperparams;
  std::vector<QelaFamilyResult> families;
};

namespace detail {

inline std::vector<std::size_t> sample_subset(std::size_t m, std::size_t d, std::uint64_t seed) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  if (d == 0 || d >= m) return idx;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(d);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline std::vector<double> wrap_all(const std::vector<double>& v, const EncodingFamilyTemplate& fam) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = wrap_into(v[i], fam.bound(i));
  return out;
}

/// Cost of a model on data; infinite when an encoding leaves its domain.
inline double guarded_cost(const ClassifierModel& model, const Dataset& data, const NoisePlacement& noise,
                           CostKind kind) {
  try {
    const auto s = dataset_scores(model, data, noise);
    return kind == CostKind::Indicator ? indicator_from_scores(s, data.labels, model.rule)
                                       : 0.5 * (1.0 - embedded_trace_from_scores(s, data.labels));
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

inline QelaFamilyResult run_qela_family(const Dataset& data, const EncodingFamilyTemplate& fam, const QelaConfig& cfg,
                                        std::size_t family_index, const DecisionRule& rule = {}) {
  QelaFamilyResult out;
  out.subset = detail::sample_subset(data.size(), cfg.subset_size, cfg.seed + 7919 * (family_index + 1));
  const Dataset sub = data.subset(out.subset);

  EncodingSpec init = fam.spec;
  if (fam.random_init) {
    auto rng = restart_rng(cfg.seed, 1000 + family_index);
    for (std::size_t i = 0; i < init.hyperparams.size(); ++i) {
      const auto b = fam.bound(i);
      init.hyperparams[i] = wrap_into(std::uniform_real_distribution<double>(b.lo, b.hi)(rng), b);
    }
  }
  out.initial = init;

  ClassifierModel model;
  model.encoding = init;
  model.rule = rule;
  model.ansatz = AnsatzParams::zeros(init.qubits_for(data.n_features()));

  // alpha: noiseless training
  const NoisePlacement clean;
  CostObserver alpha_obs;
  if (cfg.observer) alpha_obs = [&cfg](const NoisePlacement& n) { cfg.observer(QelaPhase::Alpha, n); };
  TrainConfig acfg = cfg.alpha_cfg;
  acfg.seed = cfg.alpha_cfg.seed + family_index;
  const auto trained = train(model, sub, cfg.alpha_cost, clean, acfg, alpha_obs);
  out.alpha = trained.best_params;
  model.ansatz = out.alpha;
  out.noiseless_cost = detail::guarded_cost(model, sub, clean, CostKind::Indicator);
  out.noisy_fixed_cost = detail::guarded_cost(model, sub, cfg.noise, CostKind::Indicator);

  // theta: hyperparameters under noise, alpha fixed
  out.tuned = init;
  out.post_cost = out.noisy_fixed_cost;
  if (!init.hyperparams.empty()) {
    const Objective f = [&](const std::vector<double>& h) {
      if (cfg.observer) cfg.observer(QelaPhase::Theta, cfg.noise);
      return detail::guarded_cost(model.with_encoding(init.with_hyperparams(detail::wrap_all(h, fam))), sub,
                                  cfg.noise, cfg.theta_cost);
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_h = init.hyperparams;
    for (std::size_t r = 0; r < cfg.theta_cfg.restarts; ++r) {
      std::vector<double> h0 = init.hyperparams;
      if (r > 0) {
        auto rng = restart_rng(cfg.theta_cfg.seed + family_index, r);
        for (std::size_t i = 0; i < h0.size(); ++i) {
          const auto b = fam.bound(i);
          h0[i] = std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
        }
      }
      const auto res = nelder_mead(f, h0, cfg.theta_cfg.options());
      if (res.value < best) {
        best = res.value;
        best_h = detail::wrap_all(res.x, fam);
      }
    }
    out.tuned = init.with_hyperparams(best_h);
    out.post_cost = detail::guarded_cost(model.with_encoding(out.tuned), sub, cfg.noise, CostKind::Indicator);
  }
  return out;
}

/// Runs every family and keeps the one with the lowest post-tuning cost.
inline QelaResult run_qela(const Dataset& data, const EncodingFamilySet& families, const QelaConfig& cfg,
                           const DecisionRule& rule = {}) {
  families.validate();
  if (data.empty()) throw std::invalid_argument("QELA dataset is empty");
  if (cfg.subset_size > data.size()) throw std::invalid_argument("QELA subset size exceeds the dataset");
  QelaResult result;
  result.families = parallel_map(families.families.size(), cfg.workers, [&](std::size_t j) {
    return run_qela_family(data, families.families[j], cfg, j, rule);
  });
  result.best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < result.families.size(); ++j) {
    if (result.families[j].post_cost < result.best_cost) {
      result.best_cost = result.families[j].post_cost;
      result.best_family = j;
    }
  }
  const auto& best = result.families[result.best_family];
  result.best_alpha = best.alpha;
  result.best_hyperparams = best.tuned.hyperparams;
  return result;
}

// --- Hyperparameter landscape --------------------------------------------------

struct LandscapeCell {
  double theta = 0.0;
  double phi = 0.0;
  double accuracy_noiseless = 0.0;
  double accuracy_noisy = 0.0;
  double delta = 0.0;
};

/// Sweeps (theta, phi) of a two-hyperparameter encoding at fixed ansatz.
inline std::vector<LandscapeCell> hyperparameter_landscape(const ClassifierModel& model, const Dataset& data,
                                                           const NoisePlacement& noise,
                                                           const std::vector<double>& thetas,
                                                           const std::vector<double>& phis,
                                                           std::size_t workers = 1) {
  if (EncodingSpec::hyperparam_count(model.encoding.family) != 2)
    throw std::invalid_argument("landscape sweep needs an encoding with (theta, phi)");
  const std::size_t n = thetas.size() * phis.size();
  return parallel_map(n, workers, [&](std::size_t k) {
    const double t = thetas[k / phis.size()], p = phis[k % phis.size()];
    const ClassifierModel m = model.with_encoding(model.encoding.with_hyperparams({t, p}));
    const auto r = robust_set(m, data, noise);
    return LandscapeCell{t, p, 1.0 - r.noiseless_cost, 1.0 - r.noisy_cost, r.delta};
  });
}

}  // namespace qrobust
