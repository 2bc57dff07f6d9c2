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

using namespace qrobust;
using Catch::Approx;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

PureState bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(v);
}

}  // namespace

TEST_CASE("tensor products of small operators", "[test_core]") {
  CHECK(tensor(pauli::I(), pauli::I()).isApprox(ComplexMatrix::Identity(4, 4)));
  CHECK(tensor(pauli::Z(), pauli::Z()).isApprox(diag({1, -1, -1, 1})));
  CHECK(tensor(PureState::basis(1, 0).projector(), pauli::I()).isApprox(diag({1, 1, 0, 0})));

  oracle::Gen g(1);
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = g.ginibre(2), b = g.ginibre(4);
    CHECK(oracle::max_abs_diff(tensor(a, b), oracle::kron(oracle::Mat::from(a), oracle::Mat::from(b))) < 1e-12);
  }
}

TEST_CASE("state constructors enforce their invariants", "[test_core]") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState(v), invariant_error);
  CHECK_THROWS_AS(PureState(ComplexVector::Ones(3) / std::sqrt(3.0)), dimension_error);

  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), invariant_error);   // trace
  CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), invariant_error);  // negative eigenvalue
  ComplexMatrix nh = diag({0.5, 0.5});
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(nh), invariant_error);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0), dimension_error);
  CHECK_NOTHROW(DensityMatrix(diag({1.0 + 5e-11, -5e-11})));  // within tolerance

  CHECK_THROWS_AS(Observable(nh), invariant_error);
}

TEST_CASE("expectation values", "[test_core]") {
  CHECK(expectation(PureState::basis(1, 0), projector0()) == Approx(1.0));
  CHECK(expectation(DensityMatrix::maximally_mixed(1), projector0()) == Approx(0.5));
  CHECK(std::abs(expectation(PureState::plus(), Observable(pauli::Z()))) < 1e-15);
  CHECK_THROWS_AS(expectation(PureState::plus(), projector0(0, 2)), dimension_error);
}

TEST_CASE("fidelity examples", "[test_core]") {
  const DensityMatrix zero = PureState::basis(1, 0), one = PureState::basis(1, 1), plus = PureState::plus();
  CHECK(fidelity(zero, one) == Approx(0.0).margin(1e-12));
  CHECK(fidelity(zero, plus) == Approx(0.5).margin(1e-12));
  CHECK(fidelity(PureState::basis(1, 0), plus) == Approx(0.5).margin(1e-12));
  oracle::Gen g(2);
  for (int t = 0; t < 20; ++t) {
    const auto rho = g.density(2);
    CHECK(fidelity(rho, rho) == Approx(1.0).margin(1e-8));
  }
}

TEST_CASE("fidelity properties on random states", "[test_core][property]") {
  oracle::Gen g(3);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + g.index(2);
    const auto tau = g.density(n), omega = g.density(n);
    const double f = fidelity(tau, omega);
    CHECK(std::abs(f - fidelity(omega, tau)) < 1e-9);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-10);
    // Fuchs-van de Graaf
    CHECK(trace_norm(tau.matrix() - omega.matrix()) <= 2.0 * std::sqrt(1.0 - f) + 1e-9);
    if (n == 1)
      CHECK(std::abs(f - oracle::qubit_fidelity(oracle::Mat::from(tau.matrix()), oracle::Mat::from(omega.matrix()))) <
            1e-8);
  }
}

TEST_CASE("partial trace", "[test_core]") {
  const DensityMatrix r = partial_trace(PureState::basis(2, 0), {0});
  CHECK(r.matrix().isApprox(PureState::basis(1, 0).projector()));
  CHECK(partial_trace(bell(), {0}).matrix().isApprox(ComplexMatrix::Identity(2, 2) / 2.0));
  CHECK(partial_trace(bell(), {1}).matrix().isApprox(ComplexMatrix::Identity(2, 2) / 2.0));

  oracle::Gen g(4);
  for (int t = 0; t < 100; ++t) {
    const auto a = g.density(1), b = g.density(2);
    const DensityMatrix ab = DensityMatrix::trusted(tensor(a.matrix(), b.matrix()));
    CHECK((partial_trace(ab, {0}).matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((partial_trace(ab, {1, 2}).matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(partial_trace(bell(), {2}), dimension_error);
  CHECK_THROWS_AS(partial_trace(bell(), {0, 0}), dimension_error);
}

TEST_CASE("projector probabilities from matrix elements", "[test_core][property]") {
  const auto [a0, a1] = projector_prob_via_elements(PureState::basis(1, 0).projector(), pauli::I());
  CHECK(a0 == Approx(1.0));
  CHECK(a1 == Approx(0.0).margin(1e-15));
  const auto [h0, h1] = projector_prob_via_elements(PureState::basis(1, 0).projector(), gates::hadamard());
  CHECK(h0 == Approx(0.5));
  CHECK(h1 == Approx(0.5));

  oracle::Gen g(5);
  for (int t = 0; t < 1000; ++t) {
    const ComplexMatrix raw = g.ginibre(2);
    const ComplexMatrix a = 0.5 * (raw + raw.adjoint());
    const ComplexMatrix u = g.unitary(2);
    const auto [p0, p1] = projector_prob_via_elements(a, u);
    const oracle::Mat rot = oracle::mul(oracle::Mat::from(u), oracle::mul(oracle::Mat::from(a), oracle::dag(oracle::Mat::from(u))));
    CHECK(std::abs(p0 - rot(0, 0).real()) < 1e-12);
    CHECK(std::abs(p1 - rot(1, 1).real()) < 1e-12);
  }
  CHECK_THROWS_AS(projector_prob_via_elements(pauli::Z(), 2.0 * pauli::I()), invariant_error);
}

TEST_CASE("unitary conjugation preserves density-matrix invariants", "[test_core][property]") {
  oracle::Gen g(6);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + g.index(3);
    const auto rho = g.density(n);
    const auto out = conjugate(rho, g.unitary(rho.dim()));
    CHECK_NOTHROW(out.validate());
    CHECK(std::abs(out.purity() - rho.purity()) < 1e-10);
  }
}
