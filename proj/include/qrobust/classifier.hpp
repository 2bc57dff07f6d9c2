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

// Variational binary classifier: encode -> noise -> U(alpha) -> noise -> measure.

#pragma once

#include "qrobust/channels.hpp"
#include "qrobust/core.hpp"
#include "qrobust/dataset.hpp"
#include "qrobust/encodings.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace qrobust {

// --- Ansatz -----------------------------------------------------------------

/// Ansatz angles: 3 for one qubit, 12 for two qubits. Stored unreduced.
struct AnsatzParams {
  std::vector<double> alpha;

  static constexpr std::size_t kOneQubit = 3;
  static constexpr std::size_t kTwoQubit = 12;

  static std::size_t count_for(std::size_t n_qubits) {
    if (n_qubits == 1) return kOneQubit;
    if (n_qubits == 2) return kTwoQubit;
    throw dimension_error("ansatz supports 1 or 2 qubits, requested " + std::to_string(n_qubits));
  }

  static AnsatzParams zeros(std::size_t n_qubits) { return {std::vector<double>(count_for(n_qubits), 0.0)}; }

  std::size_t n_qubits() const {
    if (alpha.size() == kOneQubit) return 1;
    if (alpha.size() == kTwoQubit) return 2;
    throw dimension_error("ansatz must have 3 or 12 angles, got " + std::to_string(alpha.size()));
  }

  void validate() const {
    n_qubits();
    for (double a : alpha)
      if (!std::isfinite(a)) throw std::invalid_argument("ansatz angle is not finite");
  }
};

namespace gates {

inline ComplexMatrix rz(double gamma) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -gamma / 2.0);
  m(1, 1) = std::polar(1.0, gamma / 2.0);
  return m;
}

inline ComplexMatrix ry(double gamma) {
  ComplexMatrix m(2, 2);
  const double c = std::cos(gamma / 2.0), s = std::sin(gamma / 2.0);
  m << c, -s, s, c;
  return m;
}

inline ComplexMatrix hadamard() {
  ComplexMatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

/// CNOT on two qubits; qubit 0 is the leading tensor factor.
inline ComplexMatrix cnot(std::size_t control, std::size_t target) {
  if (control > 1 || target > 1 || control == target) throw dimension_error("cnot: invalid qubit pair");
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int b = 0; b < 4; ++b) {
    const int bits[2] = {(b >> 1) & 1, b & 1};
    int out[2] = {bits[0], bits[1]};
    out[target] ^= bits[control];
    m(out[0] * 2 + out[1], b) = 1.0;
  }
  return m;
}

}  // namespace gates

/// Rz(2 a1) Ry(2 a2) Rz(2 a3): any single-qubit unitary up to global phase.
inline ComplexMatrix single_qubit_unitary(double a1, double a2, double a3) {
  ComplexMatrix u(2, 2);
  const double c = std::cos(a2), s = std::sin(a2);
  u(0, 0) = std::polar(c, -a1 - a3);
  u(0, 1) = -std::polar(s, -a1 + a3);
  u(1, 0) = std::polar(s, a1 - a3);
  u(1, 1) = std::polar(c, a1 + a3);
  return u;
}

/// Circuit layers whose ordered product (last * ... * first) is U(alpha).
///
/// Two qubits: local unitaries on both qubits, a three-CNOT entangling core
/// with angles {2 a7 + pi, 2 a8, 2 a9}, then a local unitary on the
/// classification qubit only.
inline std::vector<ComplexMatrix> ansatz_stages(const AnsatzParams& params, std::size_t classification_qubit = 0) {
  params.validate();
  const auto& a = params.alpha;
  if (params.n_qubits() == 1) return {single_qubit_unitary(a[0], a[1], a[2])};
  if (classification_qubit > 1) throw dimension_error("classification qubit out of range");
  const ComplexMatrix id = pauli::I();
  const double g1 = 2.0 * a[6] + kPi, g2 = 2.0 * a[7], g3 = 2.0 * a[8];
  const ComplexMatrix last = single_qubit_unitary(a[9], a[10], a[11]);
  return {
      tensor(single_qubit_unitary(a[0], a[1], a[2]), single_qubit_unitary(a[3], a[4], a[5])),
      gates::cnot(1, 0),
      tensor(gates::rz(g1), gates::ry(g2)),
      gates::cnot(0, 1),
      tensor(id, gates::ry(g3)),
      gates::cnot(1, 0),
      classification_qubit == 0 ? tensor(last, id) : tensor(id, last),
  };
}

inline ComplexMatrix unitary_from_params(const AnsatzParams& params, std::size_t classification_qubit = 0) {
  const auto stages = ansatz_stages(params, classification_qubit);
  ComplexMatrix u = stages.front();
  for (std::size_t i = 1; i < stages.size(); ++i) u = stages[i] * u;
  return u;
}

// --- Decision rule ----------------------------------------------------------

enum class Basis { Z, X, Y };

inline std::string_view to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Y: return "Y";
  }
  return "?";
}

inline Basis basis_from_string(std::string_view s) {
  if (s == "Z" || s == "z") return Basis::Z;
  if (s == "X" || s == "x") return Basis::X;
  if (s == "Y" || s == "y") return Basis::Y;
  throw std::invalid_argument("unknown measurement basis '" + std::string(s) + "'");
}

/// Single-qubit projector onto the basis state read as label 0.
inline ComplexMatrix basis_projector(Basis b) {
  ComplexVector v(2);
  switch (b) {
    case Basis::Z: v << 1, 0; break;
    case Basis::X: v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0); break;
    case Basis::Y: v << 1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0)); break;
  }
  return v * v.adjoint();
}

struct DecisionRule {
  Basis basis = Basis::Z;
  double threshold = 0.5;

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
      throw std::invalid_argument("decision threshold must lie in (0, 1), got " + std::to_string(threshold));
  }

  /// Label 0 iff score >= threshold.
  int label(double score) const { return score >= threshold ? 0 : 1; }
};

// --- Model ------------------------------------------------------------------

struct ClassifierModel {
  EncodingSpec encoding;
  AnsatzParams ansatz;
  DecisionRule rule;
  std::size_t classification_qubit = 0;

  std::size_t n_qubits() const { return ansatz.n_qubits(); }

  void validate(std::size_t n_features) const {
    encoding.check();
    ansatz.validate();
    rule.validate();
    const std::size_t nq = encoding.qubits_for(n_features);
    if (nq != ansatz.n_qubits())
      throw dimension_error("encoding produces " + std::to_string(nq) + " qubit(s) but the ansatz acts on " +
                            std::to_string(ansatz.n_qubits()));
    if (classification_qubit >= nq) throw dimension_error("classification qubit out of range");
  }

  ClassifierModel with_params(AnsatzParams p) const {
    ClassifierModel m = *this;
    m.ansatz = std::move(p);
    return m;
  }

  ClassifierModel with_encoding(EncodingSpec e) const {
    ClassifierModel m = *this;
    m.encoding = std::move(e);
    return m;
  }
};

/// Where noise acts in the pipeline. Interleaved entries (k, ch) apply ch
/// right after ansatz stage k.
struct NoisePlacement {
  std::optional<KrausChannel> after_encoding;
  std::optional<KrausChannel> after_evolution;
  std::vector<std::pair<std::size_t, KrausChannel>> interleaved;

  static NoisePlacement none() { return {}; }
  static NoisePlacement after_evolution_only(KrausChannel ch) { return {std::nullopt, std::move(ch), {}}; }
  static NoisePlacement after_encoding_only(KrausChannel ch) { return {std::move(ch), std::nullopt, {}}; }

  bool empty() const { return !after_encoding && !after_evolution && interleaved.empty(); }

  void validate(std::size_t n_qubits, std::size_t n_stages) const {
    auto check = [n_qubits](const KrausChannel& ch, const char* where) {
      if (ch.n_qubits() != n_qubits)
        throw dimension_error(std::string("noise '") + where + "' acts on " + std::to_string(ch.n_qubits()) +
                              " qubit(s), model has " + std::to_string(n_qubits));
    };
    if (after_encoding) check(*after_encoding, "after_encoding");
    if (after_evolution) check(*after_evolution, "after_evolution");
    for (const auto& [k, ch] : interleaved) {
      check(ch, "interleaved");
      if (k >= n_stages) throw dimension_error("interleaved noise stage index out of range");
    }
  }
};

/// Promotes a single-qubit channel to a product channel on every qubit.
inline KrausChannel lift_to(const KrausChannel& ch, std::size_t n_qubits) {
  if (ch.n_qubits() == n_qubits) return ch;
  if (ch.n_qubits() == 1) return ch.lifted(n_qubits);
  throw dimension_error("cannot lift a " + std::to_string(ch.n_qubits()) + "-qubit channel to " +
                        std::to_string(n_qubits) + " qubits");
}

/// Applies stages in order with interleaved channels; returns the final matrix.
inline ComplexMatrix evolve_interleaved(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& stages,
                                        const std::vector<std::pair<std::size_t, KrausChannel>>& interleaved) {
  ComplexMatrix out = rho;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    out = stages[k] * out * stages[k].adjoint();
    for (const auto& [idx, ch] : interleaved)
      if (idx == k) out = ch.apply_matrix(out);
  }
  return out;
}

struct Prediction {
  int label = 0;
  double score = 0.0;
};

/// A model with its unitary and measurement operator precomputed.
class CompiledModel {
 public:
  explicit CompiledModel(const ClassifierModel& model, const NoisePlacement& noise = {})
      : model_(model), noise_(noise) {
    model_.rule.validate();
    stages_ = ansatz_stages(model_.ansatz, model_.classification_qubit);
    unitary_ = stages_.front();
    for (std::size_t i = 1; i < stages_.size(); ++i) unitary_ = stages_[i] * unitary_;
    const std::size_t n = model_.n_qubits();
    if (model_.classification_qubit >= n) throw dimension_error("classification qubit out of range");
    projector_ = embed_single_qubit(basis_projector(model_.rule.basis), model_.classification_qubit, n);
    noise_.validate(n, stages_.size());
  }

  const ClassifierModel& model() const { return model_; }
  const NoisePlacement& noise() const { return noise_; }
  const ComplexMatrix& unitary() const { return unitary_; }
  const std::vector<ComplexMatrix>& stages() const { return stages_; }
  const ComplexMatrix& projector() const { return projector_; }

  /// rho~ after encoding noise, evolution (with interleaved noise) and
  /// post-evolution noise.
  ComplexMatrix final_matrix(const ComplexMatrix& encoded) const {
    ComplexMatrix rho = noise_.after_encoding ? noise_.after_encoding->apply_matrix(encoded) : encoded;
    if (noise_.interleaved.empty())
      rho = unitary_ * rho * unitary_.adjoint();
    else
      rho = evolve_interleaved(rho, stages_, noise_.interleaved);
    if (noise_.after_evolution) rho = noise_.after_evolution->apply_matrix(rho);
    return rho;
  }

  double score_from_final(const ComplexMatrix& rho) const { return (projector_ * rho).trace().real(); }

  double score_state(const PureState& psi) const {
    if (noise_.empty()) {
      const ComplexVector phi = unitary_ * psi.amplitudes();
      return phi.dot(projector_ * phi).real();
    }
    return score_from_final(final_matrix(psi.projector()));
  }

  double score(const FeatureVector& x) const { return score_state(encode_state(x, model_.encoding)); }

  Prediction predict(const FeatureVector& x) const {
    const double s = score(x);
    return {model_.rule.label(s), s};
  }

 private:
  ClassifierModel model_;
  NoisePlacement noise_;
  std::vector<ComplexMatrix> stages_;
  ComplexMatrix unitary_;
  ComplexMatrix projector_;
};

inline DensityMatrix final_state(const ClassifierModel& model, const FeatureVector& x,
                                 const NoisePlacement& noise = {}) {
  model.validate(x.size());
  CompiledModel cm(model, noise);
  return DensityMatrix::trusted(cm.final_matrix(encode(x, model.encoding).matrix()));
}

inline Prediction predict(const ClassifierModel& model, const FeatureVector& x, const NoisePlacement& noise = {}) {
  model.validate(x.size());
  return CompiledModel(model, noise).predict(x);
}

/// Score Tr[P~0 rho~] with P~0 = p00 |0><0| + p01 |1><1| on the classification
/// qubit, in the rule's measurement basis.
inline Prediction predict_with_measurement_noise(const ClassifierModel& model, const FeatureVector& x,
                                                 const AssignmentMatrix& assign, const NoisePlacement& noise = {}) {
  assign.validate();
  const double s = predict(model, x, noise).score;
  const double noisy = assign.p00 * s + assign.p01 * (1.0 - s);
  return {model.rule.label(noisy), noisy};
}

struct SampledLabel {
  int label = 0;
  std::size_t zero_count = 0;
};

/// Majority vote over `shots` Bernoulli(score) outcomes; deterministic in seed.
inline SampledLabel sample_label_from_score(double score, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < shots; ++i)
    if (u(rng) < score) ++zeros;
  return {2 * zeros >= shots ? 0 : 1, zeros};
}

inline SampledLabel sample_label(const ClassifierModel& model, const FeatureVector& x, const NoisePlacement& noise,
                                 std::size_t shots, std::uint64_t seed) {
  return sample_label_from_score(predict(model, x, noise).score, shots, seed);
}

inline double boundary_residual(const ClassifierModel& model, const FeatureVector& x) {
  return predict(model, x).score - model.rule.threshold;
}

// --- Costs ------------------------------------------------------------------

/// Scores of every dataset point under the model and noise.
inline std::vector<double> dataset_scores(const ClassifierModel& model, const Dataset& data,
                                          const NoisePlacement& noise = {}) {
  if (data.empty()) throw std::invalid_argument("dataset is empty");
  model.validate(data.n_features());
  CompiledModel cm(model, noise);
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& x : data.points) scores.push_back(cm.score(x));
  return scores;
}

inline double indicator_from_scores(const std::vector<double>& scores, const std::vector<int>& labels,
                                    const DecisionRule& rule) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (rule.label(scores[i]) != labels[i]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(scores.size());
}

/// Tr[D sigma~] = (1/M) sum_i (2 s_i - 1)(1 - 2 y_i).
inline double embedded_trace_from_scores(const std::vector<double>& scores, const std::vector<int>& labels) {
  double acc = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) acc += (2.0 * scores[i] - 1.0) * (1.0 - 2.0 * labels[i]);
  return acc / static_cast<double>(scores.size());
}

inline double cost_indicator(const ClassifierModel& model, const Dataset& data, const NoisePlacement& noise = {}) {
  return indicator_from_scores(dataset_scores(model, data, noise), data.labels, model.rule);
}

struct EmbeddedCost {
  double trace = 0.0;            // Tr[D sigma~], in [-1, 1]
  double rescaled_error = 0.0;   // (1 - trace) / 2, in [0, 1]
};

inline EmbeddedCost cost_embedded(const ClassifierModel& model, const Dataset& data, const NoisePlacement& noise = {}) {
  const double t = embedded_trace_from_scores(dataset_scores(model, data, noise), data.labels);
  return {t, 0.5 * (1.0 - t)};
}

/// sigma~ = (1/M) sum_i rho~_i (x) |y_i><y_i|; label qubit is the last factor.
inline DensityMatrix embedded_state(const ClassifierModel& model, const Dataset& data,
                                    const NoisePlacement& noise = {}) {
  if (data.empty()) throw std::invalid_argument("dataset is empty");
  model.validate(data.n_features());
  CompiledModel cm(model, noise);
  const Eigen::Index d = Eigen::Index{1} << model.n_qubits();
  ComplexMatrix sigma = ComplexMatrix::Zero(2 * d, 2 * d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const ComplexMatrix rho = cm.final_matrix(encode(data.points[i], model.encoding).matrix());
    sigma += tensor(rho, PureState::basis(1, static_cast<std::size_t>(data.labels[i])).projector());
  }
  return DensityMatrix::trusted(sigma / static_cast<double>(data.size()));
}

/// D = (2 P_basis - I) on the classification qubit (x) Z on the label qubit.
inline Observable embedded_observable(const ClassifierModel& model) {
  const std::size_t n = model.n_qubits();
  const ComplexMatrix c = 2.0 * basis_projector(model.rule.basis) - pauli::I();
  return Observable(tensor(embed_single_qubit(c, model.classification_qubit, n), pauli::Z()));
}

}  // namespace qrobust
