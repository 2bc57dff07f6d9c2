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

// Noise channels in operator-sum form, and their fixed points.

#pragma once

#include "qrobust/core.hpp"

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qrobust {

enum class ChannelKind {
  Identity,
  Pauli,
  BitFlip,
  Dephasing,
  Depolarizing,
  GlobalDepolarizing,
  AmplitudeDamping,
  Custom,
};

inline std::string_view to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::Identity: return "identity";
    case ChannelKind::Pauli: return "pauli";
    case ChannelKind::BitFlip: return "bit_flip";
    case ChannelKind::Dephasing: return "dephasing";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::GlobalDepolarizing: return "global_depolarizing";
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::Custom: return "custom";
  }
  return "unknown";
}

inline ChannelKind channel_kind_from_string(std::string_view s) {
  if (s == "identity") return ChannelKind::Identity;
  if (s == "pauli") return ChannelKind::Pauli;
  if (s == "bit_flip") return ChannelKind::BitFlip;
  if (s == "dephasing" || s == "phase_flip") return ChannelKind::Dephasing;
  if (s == "depolarizing") return ChannelKind::Depolarizing;
  if (s == "global_depolarizing") return ChannelKind::GlobalDepolarizing;
  if (s == "amplitude_damping") return ChannelKind::AmplitudeDamping;
  throw std::invalid_argument("unknown channel kind '" + std::string(s) + "'");
}

/// Serializable channel description.
///
/// Parameter layout per kind:
///   identity             {} or {n_qubits}
///   pauli                {p_I, p_X, p_Y, p_Z}
///   bit_flip, dephasing, depolarizing, amplitude_damping   {p}
///   global_depolarizing  {p, n_qubits}
struct ChannelSpec {
  ChannelKind kind = ChannelKind::Identity;
  std::vector<double> params;
};

/// Completely positive trace-preserving map given by Kraus operators.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> kraus, std::string label = "custom")
      : kraus_(std::move(kraus)), label_(std::move(label)) {
    if (kraus_.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
    const Eigen::Index d = kraus_.front().rows();
    n_qubits_ = detail::qubits_for_dimension(d);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& k : kraus_) {
      if (k.rows() != d || k.cols() != d) throw dimension_error("Kraus operators must share one square dimension");
      sum += k.adjoint() * k;
    }
    const double defect = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > kTolerance)
      throw invariant_error("Kraus completeness violated by " + std::to_string(defect) + " (" + label_ + ")");
  }

  static KrausChannel identity(std::size_t n_qubits = 1) { return KrausChannel({qrobust::identity(n_qubits)}, "identity"); }

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return kraus_.front().rows(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const std::string& label() const { return label_; }

  /// Sum_k E_k M E_k^dagger for an arbitrary square matrix M.
  ComplexMatrix apply_matrix(const ComplexMatrix& m) const {
    if (m.rows() != dim() || m.cols() != dim())
      throw dimension_error("channel '" + label_ + "' acts on dimension " + std::to_string(dim()) +
                            ", got " + std::to_string(m.rows()));
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& k : kraus_) out.noalias() += k * m * k.adjoint();
    return out;
  }

  DensityMatrix apply(const DensityMatrix& rho) const { return DensityMatrix::trusted(apply_matrix(rho.matrix())); }

  /// This channel on the leading qubits, `other` on the trailing ones.
  KrausChannel tensor(const KrausChannel& other) const {
    std::vector<ComplexMatrix> ops;
    ops.reserve(kraus_.size() * other.kraus_.size());
    for (const auto& a : kraus_)
      for (const auto& b : other.kraus_) ops.push_back(qrobust::tensor(a, b));
    return KrausChannel(std::move(ops), label_ + "(x)" + other.label_);
  }

  /// Apply `this` first, then `next`.
  KrausChannel then(const KrausChannel& next) const {
    if (next.dim() != dim()) throw dimension_error("channel composition: dimension mismatch");
    std::vector<ComplexMatrix> ops;
    for (const auto& b : next.kraus_)
      for (const auto& a : kraus_) ops.push_back(b * a);
    return KrausChannel(std::move(ops), next.label_ + "o" + label_);
  }

  /// Independent copies of a single-qubit channel on each of n qubits.
  KrausChannel lifted(std::size_t n_qubits) const {
    if (n_qubits_ != 1) throw dimension_error("lifted() requires a single-qubit channel");
    if (n_qubits == 0) throw dimension_error("lifted() requires at least one qubit");
    KrausChannel out = *this;
    for (std::size_t q = 1; q < n_qubits; ++q) out = out.tensor(*this);
    out.label_ = label_ + "^" + std::to_string(n_qubits);
    return out;
  }

  /// Single-qubit channel on `qubit`, identity on the rest.
  KrausChannel on_qubit(std::size_t qubit, std::size_t n_qubits) const {
    if (n_qubits_ != 1) throw dimension_error("on_qubit() requires a single-qubit channel");
    if (qubit >= n_qubits) throw dimension_error("on_qubit(): qubit index out of range");
    std::vector<ComplexMatrix> ops;
    for (const auto& k : kraus_) ops.push_back(embed_single_qubit(k, qubit, n_qubits));
    return KrausChannel(std::move(ops), label_ + "@" + std::to_string(qubit));
  }

  /// Matrix S with vec(E(M)) = S vec(M), column-stacking vec.
  ComplexMatrix superoperator() const {
    const Eigen::Index d2 = dim() * dim();
    ComplexMatrix s = ComplexMatrix::Zero(d2, d2);
    for (const auto& k : kraus_) s += qrobust::tensor(k.conjugate(), k);
    return s;
  }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::string label_;
  std::size_t n_qubits_ = 0;
};

namespace detail {

inline void check_probability(double p, std::string_view name) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0)
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

inline std::string format_label(std::string_view kind, const std::vector<double>& params) {
  std::ostringstream os;
  os << kind << '(';
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
  os << ')';
  return os.str();
}

inline void expect_params(const ChannelSpec& spec, std::size_t n) {
  if (spec.params.size() != n)
    throw std::invalid_argument(std::string(to_string(spec.kind)) + " expects " + std::to_string(n) +
                                " parameter(s), got " + std::to_string(spec.params.size()));
}

}  // namespace detail

inline KrausChannel pauli_channel(double p_i, double p_x, double p_y, double p_z) {
  detail::check_probability(p_i, "p_I");
  detail::check_probability(p_x, "p_X");
  detail::check_probability(p_y, "p_Y");
  detail::check_probability(p_z, "p_Z");
  const double sum = p_i + p_x + p_y + p_z;
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("Pauli probabilities must sum to 1, got " + std::to_string(sum));
  std::vector<ComplexMatrix> ops;
  const std::pair<double, ComplexMatrix> terms[] = {
      {p_i, pauli::I()}, {p_x, pauli::X()}, {p_y, pauli::Y()}, {p_z, pauli::Z()}};
  for (const auto& [p, m] : terms)
    if (p > 0.0) ops.push_back(std::sqrt(p) * m);
  return KrausChannel(std::move(ops), detail::format_label("pauli", {p_i, p_x, p_y, p_z}));
}

inline KrausChannel bit_flip(double p) {
  detail::check_probability(p, "p");
  KrausChannel ch = pauli_channel(1.0 - p, p, 0.0, 0.0);
  return KrausChannel(ch.kraus(), detail::format_label("bit_flip", {p}));
}

inline KrausChannel dephasing(double p) {
  detail::check_probability(p, "p");
  KrausChannel ch = pauli_channel(1.0 - p, 0.0, 0.0, p);
  return KrausChannel(ch.kraus(), detail::format_label("dephasing", {p}));
}

/// (1 - p) rho + p I/2, as a Pauli channel with weight p/4 on each of X, Y, Z.
inline KrausChannel depolarizing(double p) {
  detail::check_probability(p, "p");
  const double q = p / 4.0;
  KrausChannel ch = pauli_channel(1.0 - 3.0 * q, q, q, q);
  return KrausChannel(ch.kraus(), detail::format_label("depolarizing", {p}));
}

/// (1 - p) rho + p I/d on n qubits, as a uniform mixture of Pauli strings.
inline KrausChannel global_depolarizing(double p, std::size_t n_qubits) {
  detail::check_probability(p, "p");
  if (n_qubits == 0) throw std::invalid_argument("global_depolarizing needs n_qubits >= 1");
  const ComplexMatrix singles[] = {pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  const double w = p / static_cast<double>(count);
  std::vector<ComplexMatrix> ops;
  for (std::size_t s = 0; s < count; ++s) {
    const double weight = s == 0 ? 1.0 - p + w : w;
    if (weight <= 0.0) continue;
    ComplexMatrix op = ComplexMatrix::Identity(1, 1);
    for (std::size_t q = 0; q < n_qubits; ++q) op = tensor(op, singles[(s >> (2 * (n_qubits - 1 - q))) & 3U]);
    ops.push_back(std::sqrt(weight) * op);
  }
  return KrausChannel(std::move(ops),
                      detail::format_label("global_depolarizing", {p, static_cast<double>(n_qubits)}));
}

inline KrausChannel amplitude_damping(double p) {
  detail::check_probability(p, "p");
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0 << 1, 0, 0, std::sqrt(1.0 - p);
  e1 << 0, std::sqrt(p), 0, 0;
  std::vector<ComplexMatrix> ops{e0};
  if (p > 0.0) ops.push_back(e1);
  return KrausChannel(std::move(ops), detail::format_label("amplitude_damping", {p}));
}

inline KrausChannel make_channel(const ChannelSpec& spec) {
  const auto& p = spec.params;
  switch (spec.kind) {
    case ChannelKind::Identity:
      if (p.size() > 1) detail::expect_params(spec, 1);
      return KrausChannel::identity(p.empty() ? 1 : static_cast<std::size_t>(p[0]));
    case ChannelKind::Pauli:
      detail::expect_params(spec, 4);
      return pauli_channel(p[0], p[1], p[2], p[3]);
    case ChannelKind::BitFlip:
      detail::expect_params(spec, 1);
      return bit_flip(p[0]);
    case ChannelKind::Dephasing:
      detail::expect_params(spec, 1);
      return dephasing(p[0]);
    case ChannelKind::Depolarizing:
      detail::expect_params(spec, 1);
      return depolarizing(p[0]);
    case ChannelKind::GlobalDepolarizing:
      detail::expect_params(spec, 2);
      if (p[1] < 1.0 || p[1] != std::floor(p[1])) throw std::invalid_argument("global_depolarizing n must be a positive integer");
      return global_depolarizing(p[0], static_cast<std::size_t>(p[1]));
    case ChannelKind::AmplitudeDamping:
      detail::expect_params(spec, 1);
      return amplitude_damping(p[0]);
    case ChannelKind::Custom: break;
  }
  throw std::invalid_argument("make_channel: custom channels must be built from Kraus operators");
}

inline KrausChannel make_channel(ChannelKind kind, std::vector<double> params) {
  return make_channel(ChannelSpec{kind, std::move(params)});
}

inline DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (ch.dim() != rho.dim()) throw dimension_error("apply: channel/state dimension mismatch");
  return ch.apply(rho);
}

/// Applies ch_c (on the classification qubit 0) tensored with ch_rest (on the
/// remaining n-1 qubits).
inline DensityMatrix apply_factorized(const KrausChannel& ch_rest, const KrausChannel& ch_c, const DensityMatrix& rho) {
  if (ch_c.n_qubits() != 1) throw dimension_error("apply_factorized: ch_c must act on one qubit");
  if (ch_c.n_qubits() + ch_rest.n_qubits() != rho.n_qubits())
    throw dimension_error("apply_factorized: channel qubit counts do not compose to the state");
  return ch_c.tensor(ch_rest).apply(rho);
}

/// Readout noise: measured outcome k given true outcome l with probability p_kl.
struct AssignmentMatrix {
  double p00 = 1.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 1.0;

  static AssignmentMatrix from_diagonal(double p00, double p11) { return {p00, 1.0 - p11, 1.0 - p00, p11}; }

  void validate() const {
    detail::check_probability(p00, "p00");
    detail::check_probability(p01, "p01");
    detail::check_probability(p10, "p10");
    detail::check_probability(p11, "p11");
    if (std::abs(p00 + p10 - 1.0) > 1e-12 || std::abs(p01 + p11 - 1.0) > 1e-12)
      throw std::invalid_argument("assignment matrix columns must sum to 1");
  }

  bool is_identity() const { return p00 == 1.0 && p11 == 1.0 && p01 == 0.0 && p10 == 0.0; }
};

// --- Fixed points ---------------------------------------------------------

namespace detail {

/// Orthonormal basis of the null space of m (singular values below tol).
inline ComplexMatrix null_space(const ComplexMatrix& m, double tol) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < m.cols(); ++i)
    if (i >= sv.size() || sv(i) < tol) cols.push_back(i);
  ComplexMatrix out(m.cols(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(cols[j]);
  return out;
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

}  // namespace detail

struct FixedPoints {
  /// Matrices M with E(M) = M spanning the eigenvalue-1 subspace.
  std::vector<ComplexMatrix> basis;
  /// A density-operator fixed point: the channel's ergodic average of I/d.
  DensityMatrix density;
};

inline FixedPoints fixed_points(const KrausChannel& ch, double tol = 1e-8) {
  const Eigen::Index d = ch.dim();
  const ComplexMatrix s = ch.superoperator();
  const ComplexMatrix a = s - ComplexMatrix::Identity(d * d, d * d);
  const ComplexMatrix right = detail::null_space(a, tol);
  const ComplexMatrix left = detail::null_space(a.adjoint(), tol);
  if (right.cols() == 0 || right.cols() != left.cols())
    throw std::runtime_error("fixed_points: eigenvalue-1 subspace not resolved at tolerance");

  FixedPoints out{{}, DensityMatrix::maximally_mixed(ch.n_qubits())};
  for (Eigen::Index j = 0; j < right.cols(); ++j) out.basis.push_back(detail::unvec(right.col(j), d));

  // Spectral projector onto the eigenvalue-1 eigenspace. For a CPTP map this
  // equals the Cesaro limit of S^k, which maps states to states.
  const ComplexMatrix projector = right * (left.adjoint() * right).inverse() * left.adjoint();
  const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  const ComplexVector vec_mixed = Eigen::Map<const ComplexVector>(mixed.data(), d * d);
  ComplexMatrix rho = detail::unvec(projector * vec_mixed, d);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace();
  out.density = DensityMatrix(std::move(rho));
  return out;
}

}  // namespace qrobust
