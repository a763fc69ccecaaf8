#pragma once

// Finite-difference solver for the rest-state voltage problem
//
//   lambda^2 V'' = V + b max(V, 0),  V(0) = V0, V(L) = VL,
//
// used as an independent check on the closed-form equilibrium. Numerov's
// fourth-order scheme on a uniform grid; the piecewise-linear right-hand side
// is handled by damped (semismooth) Newton with a tridiagonal solve per step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "octoarm/core.hpp"

namespace octoarm {

struct BvpOracleOptions {
  std::size_t intervals = 2000;
  std::size_t max_iterations = 100;
  double tolerance = 1e-13;  // max |residual| relative to max(|V0|, |VL|, 1)
};

struct BvpSolution {
  Field s;
  Field V;
  std::size_t iterations = 0;
  double residual = 0.0;

  /// Piecewise-linear interpolation of V; exact on grid points.
  double at(double x) const {
    const double h = s[1] - s[0];
    const double pos = (x - s.front()) / h;
    if (pos <= 0.0) return V.front();
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= s.size()) return V.back();
    const double t = pos - static_cast<double>(i);
    if (t == 0.0) return V[i];
    return V[i] + t * (V[i + 1] - V[i]);
  }
};

namespace detail {
/// Thomas algorithm for a tridiagonal system (sub, diag, super), in place.
inline void solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> super,
                              std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * super[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - super[i] * rhs[i + 1]) / diag[i];
}
}  // namespace detail

inline BvpSolution solve_rest_voltage_bvp(double v0, double vl, double lambda, double b, double length,
                                          const BvpOracleOptions& opts = {}) {
  const std::size_t m = opts.intervals;
  if (m < 4) throw ConfigError("oracle.intervals", "must be at least 4");
  const double h = length / static_cast<double>(m);
  const double q = h * h / (12.0 * lambda * lambda);

  BvpSolution sol;
  sol.s.resize(m + 1);
  sol.V.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    sol.s[i] = (i == m) ? length : static_cast<double>(i) * h;
    sol.V[i] = v0 + (vl - v0) * static_cast<double>(i) / static_cast<double>(m);
  }

  auto F = [b](double v) { return v + b * (v > 0.0 ? v : 0.0); };
  auto dF = [b](double v) { return 1.0 + (v > 0.0 ? b : 0.0); };
  // R_i = V_{i-1} - 2 V_i + V_{i+1} - q (F_{i-1} + 10 F_i + F_{i+1})
  auto residuals = [&](const Field& V, Field& R) {
    R.assign(m - 1, 0.0);
    double worst = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
      const double r = V[i - 1] - 2.0 * V[i] + V[i + 1] - q * (F(V[i - 1]) + 10.0 * F(V[i]) + F(V[i + 1]));
      R[i - 1] = r;
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  };

  const double scale = std::max({std::abs(v0), std::abs(vl), 1.0});
  Field R;
  double norm_r = residuals(sol.V, R);
  std::size_t it = 0;
  while (norm_r > opts.tolerance * scale && it < opts.max_iterations) {
    ++it;
    const std::size_t k = m - 1;
    std::vector<double> sub(k, 0.0), diag(k, 0.0), super(k, 0.0);
    Field delta(k);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = j + 1;
      diag[j] = -2.0 - 10.0 * q * dF(sol.V[i]);
      if (j > 0) sub[j] = 1.0 - q * dF(sol.V[i - 1]);
      if (j + 1 < k) super[j] = 1.0 - q * dF(sol.V[i + 1]);
      delta[j] = -R[j];
    }
    detail::solve_tridiagonal(std::move(sub), std::move(diag), std::move(super), delta);
    // Backtrack until the residual decreases.
    double step = 1.0;
    Field trial = sol.V;
    for (int tries = 0; tries < 30; ++tries) {
      for (std::size_t j = 0; j < k; ++j) trial[j + 1] = sol.V[j + 1] + step * delta[j];
      Field R_trial;
      const double n_trial = residuals(trial, R_trial);
      if (n_trial < norm_r || tries == 29) {
        sol.V = trial;
        R = std::move(R_trial);
        norm_r = n_trial;
        break;
      }
      step *= 0.5;
    }
  }
  sol.iterations = it;
  sol.residual = norm_r;
  if (norm_r > opts.tolerance * scale) {
    throw TimeoutError(norm_r, "solve_rest_voltage_bvp: Newton did not converge");
  }
  return sol;
}

}  // namespace octoarm
