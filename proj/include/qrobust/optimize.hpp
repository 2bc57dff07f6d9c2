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

// Unconstrained minimizers over R^n.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qrobust {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimizeOptions {
  std::size_t max_iters = 500;
  double tolerance = 1e-6;
  double initial_step = 0.5;   // Nelder-Mead simplex edge
  double learning_rate = 0.1;  // gradient descent
  double fd_step = 1e-5;       // central-difference step
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  /// Best objective value after each iteration; entry 0 is the starting point.
  std::vector<double> history;
  std::size_t evaluations = 0;
};

/// Nelder-Mead simplex with standard coefficients (1, 2, 1/2, 1/2).
/// Stops after max_iters iterations, or once the spread of simplex values and
/// the simplex diameter both fall below tolerance.
inline OptimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizeOptions& opt = {}) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty parameter vector");
  if (opt.max_iters == 0) throw std::invalid_argument("nelder_mead: max_iters must be >= 1");
  OptimizeResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return f(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> v2;
    for (std::size_t i : order) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };

  // The start point's own value opens the history so iteration 0 is reported.
  res.history.push_back(values[0]);
  sort_simplex();
  if (values[0] < res.history.back()) res.history.back() = values[0];

  auto combine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = c[j] + t * (w[j] - c[j]);
    return out;
  };

  for (std::size_t iter = 1; iter <= opt.max_iters; ++iter) {
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[0][j]));
    if (values[n] - values[0] <= opt.tolerance && diameter <= opt.tolerance) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

    const auto xr = combine(centroid, simplex[n], -1.0);
    const double fr = eval(xr);
    if (fr < values[0]) {
      const auto xe = combine(centroid, simplex[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, simplex[n], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          simplex[i] = combine(simplex[0], simplex[i], 0.5);
          values[i] = eval(simplex[i]);
        }
      }
    }
    sort_simplex();
    res.history.push_back(std::min(res.history.back(), values[0]));
  }
  res.x = simplex[0];
  res.value = values[0];
  return res;
}

/// Gradient descent with central finite differences and a fixed step size.
inline OptimizeResult gradient_descent(const Objective& f, std::vector<double> x, const OptimizeOptions& opt = {}) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("gradient_descent: empty parameter vector");
  if (opt.max_iters == 0) throw std::invalid_argument("gradient_descent: max_iters must be >= 1");
  OptimizeResult res;
  auto eval = [&](const std::vector<double>& p) {
    ++res.evaluations;
    return f(p);
  };
  double fx = eval(x);
  std::vector<double> best = x;
  double best_value = fx;
  res.history.push_back(fx);
  std::vector<double> grad(n);
  for (std::size_t iter = 1; iter <= opt.max_iters; ++iter) {
    double gnorm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      auto xp = x, xm = x;
      xp[j] += opt.fd_step;
      xm[j] -= opt.fd_step;
      grad[j] = (eval(xp) - eval(xm)) / (2.0 * opt.fd_step);
      gnorm += grad[j] * grad[j];
    }
    if (std::sqrt(gnorm) <= opt.tolerance) break;
    for (std::size_t j = 0; j < n; ++j) x[j] -= opt.learning_rate * grad[j];
    fx = eval(x);
    if (fx < best_value) {
      best_value = fx;
      best = x;
    }
    res.history.push_back(best_value);
  }
  res.x = std::move(best);
  res.value = best_value;
  return res;
}

}  // namespace qrobust
