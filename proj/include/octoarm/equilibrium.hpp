#pragma once

// Rest-state analysis under zero input current.
//
// With fixed-fixed boundary voltages the cable equilibrium solves
//   lambda^2 V_ss = V + b g(V),   V(0) = V0, V(L) = VL.
// On any interval where V keeps one sign this is linear with length constant
// lambda / sqrt(1 + b) (V > 0) or lambda (V < 0), so the profile is a sum of
// two exponentials. If the boundary values have opposite signs the profile is
// two such pieces joined at the zero crossing s1, where the slopes must agree.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "octoarm/core.hpp"
#include "octoarm/coupling.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/neural_cable.hpp"

namespace octoarm {

/// f(s) = c1 exp(s / lh) + c2 exp(-s / lh) on [begin, end].
struct ExpPiece {
  double begin = 0.0;
  double end = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double length_constant = 1.0;

  double value(double s) const {
    return c1 * std::exp(s / length_constant) + c2 * std::exp(-s / length_constant);
  }
  double slope(double s) const {
    return (c1 * std::exp(s / length_constant) - c2 * std::exp(-s / length_constant)) / length_constant;
  }
  double curvature(double s) const { return value(s) / (length_constant * length_constant); }

  /// Piece through (a, va) and (b, vb).
  static ExpPiece through(double a, double va, double b, double vb, double lh) {
    const double det = -2.0 * std::sinh((b - a) / lh);
    ExpPiece p;
    p.begin = a;
    p.end = b;
    p.length_constant = lh;
    p.c1 = (va * std::exp(-b / lh) - vb * std::exp(-a / lh)) / det;
    p.c2 = (vb * std::exp(a / lh) - va * std::exp(b / lh)) / det;
    return p;
  }
};

struct EquilibriumVoltage {
  enum class Case { same_sign, sign_change };

  Case kind = Case::same_sign;
  double v_base = 0.0;
  double v_tip = 0.0;
  double length = 0.0;
  /// One piece for the same-sign case, two for the sign-change case.
  std::vector<ExpPiece> pieces;
  /// Zero crossing, sign-change case only.
  double crossing = 0.0;

  const ExpPiece& piece_at(double s) const {
    if (pieces.size() == 1 || s <= crossing) return pieces.front();
    return pieces.back();
  }
  double operator()(double s) const {
    if (s == 0.0) return v_base;
    if (s == length) return v_tip;
    if (kind == Case::sign_change && s == crossing) return 0.0;
    return piece_at(s).value(s);
  }
  double slope(double s) const { return piece_at(s).slope(s); }
  double second_derivative(double s) const { return piece_at(s).curvature(s); }

  Field sample(const Field& s_grid) const {
    Field v(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i) v[i] = (*this)(s_grid[i]);
    return v;
  }
};

struct EquilibriumOptions {
  /// Bisection bracket for s1 is [margin, L - margin].
  double bracket_margin = 0.0;  // 0 selects 1e-9 L
  double tolerance = 1e-12;     // [m]
};

inline EquilibriumVoltage solve_voltage_equilibrium(double v_base, double v_tip, const CableParams& params,
                                                    double length, EquilibriumOptions opts = {}) {
  params.validate();
  if (!std::isfinite(v_base) || !std::isfinite(v_tip)) {
    throw DomainError("solve_voltage_equilibrium: boundary voltages must be finite");
  }
  if (!(length > 0.0)) throw ConfigError("geometry.length", "must be positive");

  EquilibriumVoltage eq;
  eq.v_base = v_base;
  eq.v_tip = v_tip;
  eq.length = length;
  const double lam_pos = params.active_length_constant();
  const double lam_neg = params.lambda;

  if (v_base * v_tip >= 0.0) {
    eq.kind = EquilibriumVoltage::Case::same_sign;
    const bool active = v_base > 0.0 || v_tip > 0.0;
    eq.pieces.push_back(ExpPiece::through(0.0, v_base, length, v_tip, active ? lam_pos : lam_neg));
    eq.crossing = length;
    return eq;
  }

  eq.kind = EquilibriumVoltage::Case::sign_change;
  const double lam_left = v_base > 0.0 ? lam_pos : lam_neg;
  const double lam_right = v_tip > 0.0 ? lam_pos : lam_neg;
  // Slope of each piece at the crossing, each piece vanishing at s1.
  auto mismatch = [&](double s1) {
    const double left = -v_base / (lam_left * std::sinh(s1 / lam_left));
    const double right = v_tip / (lam_right * std::sinh((length - s1) / lam_right));
    return left - right;
  };
  const double margin = opts.bracket_margin > 0.0 ? opts.bracket_margin : 1e-9 * length;
  double lo = margin;
  double hi = length - margin;
  double f_lo = mismatch(lo);
  const double f_hi = mismatch(hi);
  if (!(f_lo * f_hi < 0.0)) {
    throw AnalysisError(f_lo, f_hi, "solve_voltage_equilibrium: zero crossing is not bracketed");
  }
  while (hi - lo > opts.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = mismatch(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double s1 = 0.5 * (lo + hi);
  eq.crossing = s1;
  eq.pieces.push_back(ExpPiece::through(0.0, v_base, s1, 0.0, lam_left));
  eq.pieces.push_back(ExpPiece::through(s1, 0.0, length, v_tip, lam_right));
  return eq;
}

/// kappa = c / EI (sigma(V^t) - sigma(V^b)) on every node.
inline Field rest_curvature(const Field& v_top, const Field& v_bottom, const ArmGeometry& geom) {
  const std::size_t n = geom.nodes();
  if (v_top.size() != n || v_bottom.size() != n) {
    throw DomainError("rest_curvature: voltage fields must live on the arm grid");
  }
  Field k(n);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = geom.max_couple[i] / geom.bending_stiffness(i) * (sigma(v_top[i]) - sigma(v_bottom[i]));
  }
  return k;
}

inline Field rest_curvature(const EquilibriumVoltage& top, const EquilibriumVoltage& bottom, const ArmGeometry& geom) {
  return rest_curvature(top.sample(geom.s), bottom.sample(geom.s), geom);
}

struct RestShape {
  EquilibriumVoltage top;
  EquilibriumVoltage bottom;
  Field v_top;
  Field v_bottom;
  Field kappa;
  Centerline centerline;
  double kappa_tip = 0.0;
  double curl = 0.0;       // integral of |kappa|
  double base_mean = 0.0;  // mean |kappa| over the first 25%
};

struct RestVoltages {
  double top_base = 40.0;
  double top_tip = 0.0;
  double bottom_base = 40.0;
  double bottom_tip = 0.0;
};

inline RestShape rest_shape(const RestVoltages& v, const CableParams& params, const ArmGeometry& geom) {
  RestShape r;
  r.top = solve_voltage_equilibrium(v.top_base, v.top_tip, params, geom.length);
  r.bottom = solve_voltage_equilibrium(v.bottom_base, v.bottom_tip, params, geom.length);
  r.v_top = r.top.sample(geom.s);
  r.v_bottom = r.bottom.sample(geom.s);
  r.kappa = rest_curvature(r.v_top, r.v_bottom, geom);
  r.centerline = reconstruct_shape(r.kappa, geom);
  r.kappa_tip = tip_curvature(r.kappa, geom);
  r.curl = total_curl(r.kappa, geom);
  r.base_mean = base_curl(r.kappa, geom);
  return r;
}

}  // namespace octoarm
