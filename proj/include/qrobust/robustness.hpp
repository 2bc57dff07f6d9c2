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

// Robust points and sets, analytic robustness conditions, fidelity bounds.

#pragma once

#include "qrobust/channels.hpp"
#include "qrobust/classifier.hpp"

#include <cmath>
#include <vector>

namespace qrobust {

/// A point is robust when noise leaves its predicted label unchanged.
inline bool is_robust_point(const ClassifierModel& model, const FeatureVector& x, const NoisePlacement& noise) {
  return predict(model, x, noise).label == predict(model, x).label;
}

struct RobustnessReport {
  std::vector<bool> flags;
  std::vector<int> labels_noiseless;
  std::vector<int> labels_noisy;
  std::vector<double> scores_noiseless;
  std::vector<double> scores_noisy;
  double delta = 0.0;  // fraction of robust points
  std::size_t changed_count = 0;
  bool completely_robust = false;
  // indicator cost
  double noisy_cost = 0.0;
  double noiseless_cost = 0.0;
  double delta_cost = 0.0;
  // Tr[D sigma~]
  double noisy_embedded = 0.0;
  double noiseless_embedded = 0.0;
  double delta_embedded = 0.0;

  std::size_t robust_count() const { return flags.size() - changed_count; }
};

inline RobustnessReport robust_set(const ClassifierModel& model, const Dataset& data, const NoisePlacement& noise) {
  RobustnessReport r;
  r.scores_noiseless = dataset_scores(model, data);
  r.scores_noisy = dataset_scores(model, data, noise);
  const std::size_t m = data.size();
  for (std::size_t i = 0; i < m; ++i) {
    const int a = model.rule.label(r.scores_noiseless[i]);
    const int b = model.rule.label(r.scores_noisy[i]);
    r.labels_noiseless.push_back(a);
    r.labels_noisy.push_back(b);
    r.flags.push_back(a == b);
    if (a != b) ++r.changed_count;
  }
  r.delta = static_cast<double>(m - r.changed_count) / static_cast<double>(m);
  r.completely_robust = r.changed_count == 0;
  r.noiseless_cost = indicator_from_scores(r.scores_noiseless, data.labels, model.rule);
  r.noisy_cost = indicator_from_scores(r.scores_noisy, data.labels, model.rule);
  r.delta_cost = std::abs(r.noisy_cost - r.noiseless_cost);
  r.noiseless_embedded = embedded_trace_from_scores(r.scores_noiseless, data.labels);
  r.noisy_embedded = embedded_trace_from_scores(r.scores_noisy, data.labels);
  r.delta_embedded = std::abs(r.noisy_embedded - r.noiseless_embedded);
  return r;
}

// --- Analytic conditions -----------------------------------------------------

/// Complete-robustness condition for a Pauli channel after evolution:
/// Z basis p_X + p_Y <= 1/2, X basis p_Y + p_Z <= 1/2, Y basis p_X + p_Z <= 1/2.
inline bool check_pauli_condition(double p_i, double p_x, double p_y, double p_z, Basis basis = Basis::Z) {
  pauli_channel(p_i, p_x, p_y, p_z);  // validates
  switch (basis) {
    case Basis::Z: return p_x + p_y <= 0.5;
    case Basis::X: return p_y + p_z <= 0.5;
    case Basis::Y: return p_x + p_z <= 0.5;
  }
  return false;
}

/// Closed-form robustness of a single-qubit point under amplitude damping(p)
/// after evolution. Label-0 points are always robust; a label-1 point is
/// robust iff Tr[P1 rho~] > (1 - lambda)/(1 - p), i.e. > 1/(2(1 - p)) at the
/// default threshold.
inline bool check_ampdamp_point_condition(const ClassifierModel& model, const FeatureVector& x, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("amplitude damping p must lie in [0, 1]");
  if (model.n_qubits() != 1) throw dimension_error("amplitude damping condition needs a single-qubit model");
  if (model.rule.basis != Basis::Z) throw std::invalid_argument("amplitude damping condition is stated in the Z basis");
  model.validate(x.size());
  const ComplexMatrix u = unitary_from_params(model.ansatz);
  const auto [p0, p1] = projector_prob_via_elements(encode(x, model.encoding).matrix(), u);
  if (model.rule.label(p0) == 0) return true;
  if (p >= 1.0) return false;
  return p1 > (1.0 - model.rule.threshold) / (1.0 - p);
}

/// Complete robustness under readout noise: p00 > p01, p11 > p10, and
/// p00 + p01 = 1. The noisy score is (p00 - p01) s + p01, which keeps every
/// label only when it maps s = 1/2 to 1/2; without the last identity a
/// column-stochastic matrix such as p00 = 0.9, p11 = 0.6 flips s = 0.45.
inline bool check_measurement_noise_condition(const AssignmentMatrix& a) {
  a.validate();
  return a.p00 > a.p01 && a.p11 > a.p10 && std::abs(a.p00 + a.p01 - 1.0) <= 1e-12;
}

// --- Fidelity bounds -----------------------------------------------------------

/// Per-point fidelities F(E(rho~_i), rho~_i) between noisy and noiseless final states.
inline std::vector<double> point_fidelities(const ClassifierModel& model, const Dataset& data,
                                            const NoisePlacement& noise) {
  if (data.empty()) throw std::invalid_argument("dataset is empty");
  model.validate(data.n_features());
  const CompiledModel clean(model), noisy(model, noise);
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& x : data.points) {
    const ComplexMatrix enc = encode(x, model.encoding).matrix();
    out.push_back(fidelity(DensityMatrix::trusted(noisy.final_matrix(enc)),
                           DensityMatrix::trusted(clean.final_matrix(enc))));
  }
  return out;
}

/// 2 sqrt(1 - F(E(sigma~), sigma~)) on the label-augmented state.
inline double bound_delta_cost_mixed(const ClassifierModel& model, const Dataset& data, const NoisePlacement& noise) {
  const DensityMatrix clean = embedded_state(model, data);
  const DensityMatrix noisy = embedded_state(model, data, noise);
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - fidelity(noisy, clean)));
}

/// (2/M) sum_i sqrt(1 - F(E(rho~_i), rho~_i)).
inline double bound_delta_cost_average(const ClassifierModel& model, const Dataset& data, const NoisePlacement& noise) {
  const auto f = point_fidelities(model, data, noise);
  double acc = 0.0;
  for (double fi : f) acc += std::sqrt(std::max(0.0, 1.0 - fi));
  return 2.0 * acc / static_cast<double>(f.size());
}

struct RobustSetSizeBound {
  double bound = 0.0;            // 2 sum_i sqrt(1 - F_i)
  std::size_t changed_count = 0;  // exhaustive comparison
  std::size_t robust_count = 0;   // M - changed_count
  double scaled_delta_cost = 0.0;  // M * Delta C (embedded)
  double scaled_complement = 0.0;  // M * (1 - Delta C)
};

inline RobustSetSizeBound robust_set_size_bound(const ClassifierModel& model, const Dataset& data,
                                                const NoisePlacement& noise) {
  const double avg = bound_delta_cost_average(model, data, noise);
  const auto report = robust_set(model, data, noise);
  const double m = static_cast<double>(data.size());
  RobustSetSizeBound out;
  out.bound = avg * m;
  out.changed_count = report.changed_count;
  out.robust_count = report.robust_count();
  out.scaled_delta_cost = m * report.delta_embedded;
  out.scaled_complement = m * (1.0 - report.delta_embedded);
  return out;
}

// --- Sweeps --------------------------------------------------------------------

struct PauliCell {
  double p_x = 0.0;
  double p_y = 0.0;
  double changed_fraction = 0.0;
  double misclassified_fraction = 0.0;
};

/// Pauli noise after evolution over a (p_X, p_Y) lattice with p_Z = 0.
inline std::vector<PauliCell> pauli_sweep(const ClassifierModel& model, const Dataset& data, std::size_t steps) {
  if (steps < 2) throw std::invalid_argument("pauli sweep needs at least 2 steps");
  std::vector<PauliCell> cells;
  const std::size_t n = model.n_qubits();
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      const double px = static_cast<double>(i) / static_cast<double>(steps - 1);
      const double py = static_cast<double>(j) / static_cast<double>(steps - 1);
      if (px + py > 1.0 + 1e-12) continue;
      const double pi = std::max(0.0, 1.0 - px - py);
      const auto ch = lift_to(pauli_channel(pi, px, py, 0.0), n);
      const auto r = robust_set(model, data, NoisePlacement::after_evolution_only(ch));
      cells.push_back({px, py, 1.0 - r.delta, r.noisy_cost});
    }
  }
  return cells;
}

struct MeasurementCell {
  double p00 = 1.0;
  double p11 = 1.0;
  double changed_fraction = 0.0;
  double misclassified_fraction = 0.0;
};

inline std::vector<MeasurementCell> measurement_sweep(const ClassifierModel& model, const Dataset& data,
                                                      std::size_t steps) {
  if (steps < 2) throw std::invalid_argument("measurement sweep needs at least 2 steps");
  const auto clean = dataset_scores(model, data);
  std::vector<MeasurementCell> cells;
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < steps; ++j) {
      const auto a = AssignmentMatrix::from_diagonal(static_cast<double>(i) / static_cast<double>(steps - 1),
                                                     static_cast<double>(j) / static_cast<double>(steps - 1));
      std::size_t changed = 0, wrong = 0;
      for (std::size_t k = 0; k < clean.size(); ++k) {
        const double s = a.p00 * clean[k] + a.p01 * (1.0 - clean[k]);
        const int l = model.rule.label(s);
        if (l != model.rule.label(clean[k])) ++changed;
        if (l != data.labels[k]) ++wrong;
      }
      const double m = static_cast<double>(clean.size());
      cells.push_back({a.p00, a.p11, static_cast<double>(changed) / m, static_cast<double>(wrong) / m});
    }
  }
  return cells;
}

}  // namespace qrobust
