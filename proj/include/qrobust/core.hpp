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

// Dense complex linear algebra and quantum-state primitives.
//
// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
// computational-basis index. The classification qubit is qubit 0 unless a
// model says otherwise.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrobust {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance used for every state/operator validity check.
inline constexpr double kTolerance = 1e-10;

inline constexpr double kPi = std::numbers::pi;

/// Thrown when operand dimensions do not compose.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a value violates a state, channel, or encoding invariant.
class invariant_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline std::size_t qubits_for_dimension(Eigen::Index dim) {
  if (dim < 1) throw dimension_error("dimension must be positive");
  std::size_t n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim) throw dimension_error("dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace detail

// --- Matrix helpers -------------------------------------------------------

/// Kronecker product; a occupies the more significant index bits.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

inline ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) out = tensor(out, a);
  return out;
}

inline ComplexMatrix identity(std::size_t n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  return ComplexMatrix::Identity(d, d);
}

inline bool is_unitary(const ComplexMatrix& u, double tol = kTolerance) {
  if (u.rows() != u.cols()) return false;
  return ((u.adjoint() * u) - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kTolerance) {
  return m.rows() == m.cols() && detail::hermiticity_defect(m) <= tol;
}

namespace pauli {

inline ComplexMatrix I() { return ComplexMatrix::Identity(2, 2); }

inline ComplexMatrix X() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix Y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix Z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

/// Hermitian eigendecomposition clipped at zero, then square-rooted.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Schatten-1 norm of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("trace_norm: matrix not square");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// --- Quantum state types ----------------------------------------------------

/// Normalized state vector on n qubits.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
    n_qubits_ = detail::qubits_for_dimension(amps_.size());
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kTolerance)
      throw invariant_error("pure state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
  }

  static PureState basis(std::size_t n_qubits, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n_qubits);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
  }

  static PureState plus() {
    ComplexVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return PureState(std::move(v));
  }

  std::size_t n_qubits() const { return n_qubits_; }
  const ComplexVector& amplitudes() const { return amps_; }

  ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

  PureState tensor(const PureState& other) const {
    ComplexVector v(amps_.size() * other.amps_.size());
    for (Eigen::Index i = 0; i < amps_.size(); ++i)
      v.segment(i * other.amps_.size(), other.amps_.size()) = amps_(i) * other.amps_;
    return PureState(std::move(v));
  }

 private:
  ComplexVector amps_;
  std::size_t n_qubits_ = 0;
};

/// Unit-trace, Hermitian, positive semidefinite 2^n x 2^n matrix.
class DensityMatrix {
 public:
  /// Validates trace, Hermiticity, and positivity within kTolerance.
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw dimension_error("density matrix must be square");
    n_qubits_ = detail::qubits_for_dimension(m_.rows());
    const Complex tr = m_.trace();
    if (std::abs(tr - Complex(1.0)) > kTolerance)
      throw invariant_error("density matrix trace is " + std::to_string(tr.real()) + " not 1");
    if (detail::hermiticity_defect(m_) > kTolerance) throw invariant_error("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTolerance) throw invariant_error("density matrix has a negative eigenvalue");
  }

  DensityMatrix(const PureState& psi) : m_(psi.projector()), n_qubits_(psi.n_qubits()) {}  // NOLINT

  /// Skips validation; for results of operations that preserve the invariants.
  static DensityMatrix trusted(ComplexMatrix m) {
    DensityMatrix rho;
    rho.n_qubits_ = detail::qubits_for_dimension(m.rows());
    rho.m_ = std::move(m);
    return rho;
  }

  static DensityMatrix maximally_mixed(std::size_t n_qubits) {
    const double d = static_cast<double>(std::size_t{1} << n_qubits);
    return trusted(identity(n_qubits) / d);
  }

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  double purity() const { return (m_ * m_).trace().real(); }

  /// Throws invariant_error unless every density-matrix invariant holds.
  void validate() const { DensityMatrix check(m_); }

 private:
  DensityMatrix() = default;
  ComplexMatrix m_;
  std::size_t n_qubits_ = 0;
};

/// Hermitian operator on n qubits.
class Observable {
 public:
  explicit Observable(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw dimension_error("observable must be square");
    n_qubits_ = detail::qubits_for_dimension(m_.rows());
    if (detail::hermiticity_defect(m_) > kTolerance) throw invariant_error("observable is not Hermitian");
  }

  std::size_t n_qubits() const { return n_qubits_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
  std::size_t n_qubits_ = 0;
};

/// |b><b| on `qubit` of an n-qubit register, identity elsewhere.
inline ComplexMatrix embed_single_qubit(const ComplexMatrix& op, std::size_t qubit, std::size_t n_qubits) {
  if (qubit >= n_qubits) throw dimension_error("qubit index out of range");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) out = tensor(out, q == qubit ? op : pauli::I());
  return out;
}

inline Observable projector0(std::size_t qubit = 0, std::size_t n_qubits = 1) {
  return Observable(embed_single_qubit(PureState::basis(1, 0).projector(), qubit, n_qubits));
}

inline Observable projector1(std::size_t qubit = 0, std::size_t n_qubits = 1) {
  return Observable(embed_single_qubit(PureState::basis(1, 1).projector(), qubit, n_qubits));
}

// --- Operations -------------------------------------------------------------

/// Tr[obs * rho]; the imaginary part must vanish.
inline double expectation(const DensityMatrix& rho, const Observable& obs) {
  if (rho.dim() != obs.matrix().rows()) throw dimension_error("expectation: dimension mismatch");
  const Complex tr = (obs.matrix() * rho.matrix()).trace();
  if (std::abs(tr.imag()) >= kTolerance) throw invariant_error("expectation has a non-negligible imaginary part");
  return tr.real();
}

inline double fidelity(const PureState& psi, const DensityMatrix& omega) {
  if (static_cast<Eigen::Index>(psi.amplitudes().size()) != omega.dim())
    throw dimension_error("fidelity: dimension mismatch");
  const Complex v = psi.amplitudes().dot(omega.matrix() * psi.amplitudes());
  return std::clamp(v.real(), 0.0, 1.0);
}

/// Uhlmann fidelity ||sqrt(tau) sqrt(omega)||_1^2, clamped to [0, 1].
///
/// Eigenvalues at rounding level are zeroed before the square root; otherwise
/// a pure state's spurious 1e-17 eigenvalues turn into 1e-8 errors.
inline double fidelity(const DensityMatrix& tau, const DensityMatrix& omega) {
  if (tau.dim() != omega.dim()) throw dimension_error("fidelity: dimension mismatch");
  auto root = [](const ComplexMatrix& m, const char* which) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.eigenvalues().minCoeff() < -kTolerance)
      throw invariant_error(std::string("fidelity: ") + which + " argument is not PSD");
    RealVector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = lam(i) > 1e-14 ? std::sqrt(lam(i)) : 0.0;
    return ComplexMatrix(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
  };
  const ComplexMatrix prod = root(tau.matrix(), "first") * root(omega.matrix(), "second");
  const double nuclear = Eigen::JacobiSVD<ComplexMatrix>(prod).singularValues().sum();
  return std::clamp(nuclear * nuclear, 0.0, 1.0);
}

/// Reduced state on the qubits in `keep` (ascending order kept in the output).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const std::size_t n = rho.n_qubits();
  if (keep.empty()) throw dimension_error("partial_trace: keep set must be nonempty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw dimension_error("partial_trace: duplicate qubit index");
  if (kept.back() >= n) throw dimension_error("partial_trace: qubit index out of range");

  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  // qubit q corresponds to bit (n - 1 - q) of a basis index
  auto compose = [n](std::span<const std::size_t> qubits, std::size_t bits) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      const std::size_t bit = (bits >> (qubits.size() - 1 - k)) & 1U;
      index |= bit << (n - 1 - qubits[k]);
    }
    return index;
  };

  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t r = 0; r < dk; ++r) {
    const std::size_t row_base = compose(kept, r);
    for (std::size_t c = 0; c < dk; ++c) {
      const std::size_t col_base = compose(kept, c);
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t off = compose(traced, t);
        acc += rho.matrix()(static_cast<Eigen::Index>(row_base | off), static_cast<Eigen::Index>(col_base | off));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return DensityMatrix::trusted(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  std::vector<std::size_t> k(keep);
  return partial_trace(rho, std::span<const std::size_t>(k));
}

/// Computational-basis probabilities (Tr[P0 U A U^dag], Tr[P1 U A U^dag]) of a
/// single-qubit Hermitian A, expanded in the matrix elements of U and A.
inline std::pair<double, double> projector_prob_via_elements(const ComplexMatrix& a, const ComplexMatrix& u) {
  if (a.rows() != 2 || a.cols() != 2 || u.rows() != 2 || u.cols() != 2)
    throw dimension_error("projector_prob_via_elements: expects 2x2 matrices");
  if (!is_unitary(u)) throw invariant_error("projector_prob_via_elements: U is not unitary");
  const double p0 = std::norm(u(0, 0)) * a(0, 0).real() + 2.0 * (std::conj(u(0, 0)) * u(0, 1) * a(1, 0)).real() +
                    std::norm(u(0, 1)) * a(1, 1).real();
  const double p1 = std::norm(u(1, 0)) * a(0, 0).real() + 2.0 * (std::conj(u(1, 1)) * u(1, 0) * a(0, 1)).real() +
                    std::norm(u(1, 1)) * a(1, 1).real();
  return {p0, p1};
}

/// U rho U^dagger.
inline DensityMatrix conjugate(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) throw dimension_error("conjugate: dimension mismatch");
  return DensityMatrix::trusted(u * rho.matrix() * u.adjoint());
}

}  // namespace qrobust
