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

// Classical feature vectors to quantum states.

#pragma once

#include "qrobust/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrobust {

using FeatureVector = std::vector<double>;

enum class EncodingFamily {
  Angle,
  DenseAngle,
  SuperdenseAngle,
  Wavefunction,
  GeneralizedWavefunction,
  GeneralQubit,
};

inline std::string_view to_string(EncodingFamily f) {
  switch (f) {
    case EncodingFamily::Angle: return "angle";
    case EncodingFamily::DenseAngle: return "dense_angle";
    case EncodingFamily::SuperdenseAngle: return "superdense_angle";
    case EncodingFamily::Wavefunction: return "wavefunction";
    case EncodingFamily::GeneralizedWavefunction: return "generalized_wavefunction";
    case EncodingFamily::GeneralQubit: return "general_qubit";
  }
  return "unknown";
}

inline EncodingFamily encoding_family_from_string(std::string_view s) {
  if (s == "angle") return EncodingFamily::Angle;
  if (s == "dense_angle" || s == "dae") return EncodingFamily::DenseAngle;
  if (s == "superdense_angle" || s == "sdae") return EncodingFamily::SuperdenseAngle;
  if (s == "wavefunction" || s == "wf") return EncodingFamily::Wavefunction;
  if (s == "generalized_wavefunction" || s == "gwfe") return EncodingFamily::GeneralizedWavefunction;
  if (s == "general_qubit") return EncodingFamily::GeneralQubit;
  throw std::invalid_argument("unknown encoding family '" + std::string(s) + "'");
}

/// Amplitude function for the general qubit encoding: (x1, x2) -> complex.
using AmplitudeFn = std::function<Complex(double, double)>;

/// Encoding family plus hyperparameters.
///
/// Hyperparameter layout per family:
///   Angle                    {theta}            default {1}
///   DenseAngle               {theta, phi}       default {pi, 2 pi}
///   SuperdenseAngle          {theta, phi}       default {pi, 2 pi}
///   Wavefunction             {}
///   GeneralizedWavefunction  {theta}            default {0}
///   GeneralQubit             {}                 uses f, g
/// The same hyperparameters are shared by every qubit.
struct EncodingSpec {
  EncodingFamily family = EncodingFamily::DenseAngle;
  std::vector<double> hyperparams;
  AmplitudeFn f;
  AmplitudeFn g;

  static std::vector<double> default_hyperparams(EncodingFamily family) {
    switch (family) {
      case EncodingFamily::Angle: return {1.0};
      case EncodingFamily::DenseAngle:
      case EncodingFamily::SuperdenseAngle: return {kPi, 2.0 * kPi};
      case EncodingFamily::GeneralizedWavefunction: return {0.0};
      case EncodingFamily::Wavefunction:
      case EncodingFamily::GeneralQubit: return {};
    }
    return {};
  }

  static std::size_t hyperparam_count(EncodingFamily family) { return default_hyperparams(family).size(); }

  static EncodingSpec make(EncodingFamily family, std::vector<double> hyper = {}) {
    EncodingSpec spec;
    spec.family = family;
    spec.hyperparams = hyper.empty() ? default_hyperparams(family) : std::move(hyper);
    spec.check();
    return spec;
  }

  static EncodingSpec angle(double theta = 1.0) { return make(EncodingFamily::Angle, {theta}); }
  static EncodingSpec dense_angle(double theta = kPi, double phi = 2.0 * kPi) {
    return make(EncodingFamily::DenseAngle, {theta, phi});
  }
  static EncodingSpec superdense_angle(double theta = kPi, double phi = 2.0 * kPi) {
    return make(EncodingFamily::SuperdenseAngle, {theta, phi});
  }
  static EncodingSpec wavefunction() { return make(EncodingFamily::Wavefunction); }
  static EncodingSpec generalized_wavefunction(double theta = 0.0) {
    return make(EncodingFamily::GeneralizedWavefunction, {theta});
  }
  static EncodingSpec general_qubit(AmplitudeFn f, AmplitudeFn g) {
    EncodingSpec spec;
    spec.family = EncodingFamily::GeneralQubit;
    spec.f = std::move(f);
    spec.g = std::move(g);
    spec.check();
    return spec;
  }

  EncodingSpec with_hyperparams(std::vector<double> hyper) const {
    EncodingSpec copy = *this;
    copy.hyperparams = std::move(hyper);
    copy.check();
    return copy;
  }

  void check() const {
    if (hyperparams.size() != hyperparam_count(family))
      throw std::invalid_argument("encoding '" + std::string(to_string(family)) + "' expects " +
                                  std::to_string(hyperparam_count(family)) + " hyperparameters, got " +
                                  std::to_string(hyperparams.size()));
    for (double h : hyperparams)
      if (!std::isfinite(h)) throw std::invalid_argument("encoding hyperparameter is not finite");
    if (family == EncodingFamily::GeneralQubit && (!f || !g))
      throw std::invalid_argument("general qubit encoding requires both f and g");
  }

  /// Number of qubits used for an input with n_features features.
  std::size_t qubits_for(std::size_t n_features) const {
    if (n_features == 0) throw dimension_error("feature vector is empty");
    switch (family) {
      case EncodingFamily::Angle: return n_features;
      case EncodingFamily::DenseAngle:
      case EncodingFamily::SuperdenseAngle:
      case EncodingFamily::GeneralQubit: return (n_features + 1) / 2;
      case EncodingFamily::Wavefunction:
      case EncodingFamily::GeneralizedWavefunction:
        if (n_features < 2) throw dimension_error("wavefunction encodings need at least 2 features");
        return detail::qubits_for_dimension(static_cast<Eigen::Index>(n_features));
    }
    return 0;
  }
};

namespace detail {

inline void check_finite(const FeatureVector& x) {
  if (x.empty()) throw dimension_error("feature vector is empty");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("feature vector has a non-finite entry");
}

inline ComplexVector single_qubit(Complex a0, Complex a1) {
  ComplexVector v(2);
  v << a0, a1;
  return v;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Builds a product state from per-pair amplitudes; odd N pads with zero.
template <typename PairFn>
ComplexVector pairwise_product(const FeatureVector& x, PairFn&& fn) {
  ComplexVector out = ComplexVector::Ones(1);
  for (std::size_t i = 0; i < x.size(); i += 2) {
    const double x1 = x[i];
    const double x2 = i + 1 < x.size() ? x[i + 1] : 0.0;
    out = kron(out, fn(x1, x2));
  }
  return out;
}

}  // namespace detail

/// State vector of the encoded point.
inline PureState encode_state(const FeatureVector& x, const EncodingSpec& spec) {
  detail::check_finite(x);
  spec.check();
  const auto& h = spec.hyperparams;
  switch (spec.family) {
    case EncodingFamily::Angle: {
      ComplexVector out = ComplexVector::Ones(1);
      for (double xi : x) out = detail::kron(out, detail::single_qubit(std::cos(h[0] * xi), std::sin(h[0] * xi)));
      return PureState(std::move(out));
    }
    case EncodingFamily::DenseAngle:
      return PureState(detail::pairwise_product(x, [&](double x1, double x2) {
        return detail::single_qubit(std::cos(h[0] * x1), std::polar(1.0, h[1] * x2) * std::sin(h[0] * x1));
      }));
    case EncodingFamily::SuperdenseAngle:
      return PureState(detail::pairwise_product(x, [&](double x1, double x2) {
        const double a = h[0] * x1 + h[1] * x2;
        return detail::single_qubit(std::cos(a), std::sin(a));
      }));
    case EncodingFamily::GeneralQubit:
      return PureState(detail::pairwise_product(x, [&](double x1, double x2) {
        const Complex fv = spec.f(x1, x2);
        const Complex gv = spec.g(x1, x2);
        const double n2 = std::norm(fv) + std::norm(gv);
        if (std::abs(n2 - 1.0) > 1e-9)
          throw invariant_error("general qubit encoding: |f|^2 + |g|^2 = " + std::to_string(n2) + " at (" +
                                std::to_string(x1) + ", " + std::to_string(x2) + ")");
        // renormalize so the state passes the tighter state-vector check
        const double s = 1.0 / std::sqrt(n2);
        return detail::single_qubit(s * fv, s * gv);
      }));
    case EncodingFamily::Wavefunction:
    case EncodingFamily::GeneralizedWavefunction: {
      spec.qubits_for(x.size());
      double norm2 = 0.0;
      for (double v : x) norm2 += v * v;
      if (norm2 == 0.0) throw std::domain_error("wavefunction encoding of the zero vector");
      const double norm = std::sqrt(norm2);
      ComplexVector out(static_cast<Eigen::Index>(x.size()));
      if (spec.family == EncodingFamily::Wavefunction) {
        for (std::size_t i = 0; i < x.size(); ++i) out(static_cast<Eigen::Index>(i)) = x[i] / norm;
        return PureState(std::move(out));
      }
      // Each amplitude pair (x_{2k}, x_{2k+1}) is deformed by theta; the pair
      // norm is preserved so the state stays normalized.
      const double theta = h[0];
      for (std::size_t i = 0; i < x.size(); i += 2) {
        const double a = x[i];
        const double b = x[i + 1];
        const double r0 = 1.0 + theta * b * b;
        const double r1 = 1.0 - theta * a * a;
        if (r0 < 0.0 || r1 < 0.0)
          throw std::domain_error("generalized wavefunction encoding: negative value under square root");
        out(static_cast<Eigen::Index>(i)) = std::sqrt(r0) * a / norm;
        out(static_cast<Eigen::Index>(i + 1)) = std::sqrt(r1) * b / norm;
      }
      return PureState(std::move(out));
    }
  }
  throw std::invalid_argument("unknown encoding family");
}

inline DensityMatrix encode(const FeatureVector& x, const EncodingSpec& spec) {
  return DensityMatrix(encode_state(x, spec));
}

/// Explicit 2x2 density matrix of the single-qubit dense angle encoding.
inline DensityMatrix density_matrix_closed_form_dae(const FeatureVector& x, double theta = kPi,
                                                    double phi = 2.0 * kPi) {
  if (x.size() != 2) throw dimension_error("closed-form dense angle matrix expects 2 features");
  const double c = std::cos(theta * x[0]);
  const double s = std::sin(theta * x[0]);
  ComplexMatrix m(2, 2);
  m(0, 0) = c * c;
  m(0, 1) = std::polar(1.0, -phi * x[1]) * c * s;
  m(1, 0) = std::polar(1.0, phi * x[1]) * c * s;
  m(1, 1) = s * s;
  return DensityMatrix::trusted(std::move(m));
}

}  // namespace qrobust
