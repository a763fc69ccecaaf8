#pragma once

// Post-processing helpers shared by the validation suites: decay-constant
// fits, settling times and monotonicity counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "octoarm/core.hpp"
#include "octoarm/neural_cable.hpp"

namespace octoarm {

/// Decay constant l of a field sampled on a uniform grid, assuming
/// V = A e^{s/l} + B e^{-s/l}. For such a field V_{i-1} + V_{i+1} =
/// 2 cosh(ds/l) V_i holds exactly; cosh(ds/l) is fitted by least squares over
/// nodes [first, last].
inline double fit_length_constant(const Field& V, double ds, std::size_t first = 1, std::size_t last = 0) {
  if (V.size() < 3) throw DomainError("fit_length_constant: need at least three samples");
  if (last == 0 || last + 1 >= V.size()) last = V.size() - 2;
  first = std::max<std::size_t>(first, 1);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    num += V[i] * (V[i - 1] + V[i + 1]);
    den += 2.0 * V[i] * V[i];
  }
  const double c = num / den;
  if (!(c > 1.0)) throw DomainError("fit_length_constant: field is not of exponential type");
  return ds / std::acosh(c);
}

/// Time after which `distance` stays within `fraction` of its maximum. The
/// first sample counts as settled at t[0] when the signal never moves.
inline double settling_time(const Field& t, const Field& distance, double fraction = 0.01) {
  if (t.size() != distance.size() || t.empty()) throw DomainError("settling_time: series lengths differ");
  const double peak = max_abs(distance);
  if (peak == 0.0) return t.front();
  const double band = fraction * peak;
  for (std::size_t i = t.size(); i-- > 0;) {
    if (std::abs(distance[i]) > band) return i + 1 < t.size() ? t[i + 1] : t[i];
  }
  return t.front();
}

/// Settling of the uniform step response of a free-free cable: starts from
/// rest, applies I0 everywhere, and reports when max |V - V*| last exceeds
/// `fraction` |V*| with V* = I0 / (1 + b) (I0 >= 0).
struct StepResponse {
  double settling_time = 0.0;  // [s]
  double final_error = 0.0;    // [mV]
  double steady_voltage = 0.0; // [mV]
};

inline StepResponse neural_step_settling(const CableParams& params, std::size_t nodes, double ds, double i0,
                                         double dt, double horizon, double fraction = 0.01) {
  CableStepper stepper(params, ds);
  CableState st = CableState::zeros(nodes, Muscle::top);
  const Field current(nodes, i0);
  StepResponse out;
  out.steady_voltage = i0 / (1.0 + params.b);
  const double band = fraction * std::abs(out.steady_voltage);
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  double last_out = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.step(st, current, BoundaryCondition::free(), dt, k);
    double err = 0.0;
    for (double v : st.V) err = std::max(err, std::abs(v - out.steady_voltage));
    if (err > band) last_out = static_cast<double>(k) * dt;
    out.final_error = err;
  }
  out.settling_time = last_out + dt;
  return out;
}

/// Number of samples that rise above the running minimum by more than
/// `slack` (absolute) or by `relative` times the previous value.
inline std::size_t count_increases(const Field& x, double relative, double slack = 0.0) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[i - 1] + slack + relative * std::abs(x[i - 1])) ++bad;
  }
  return bad;
}

/// Drops below the running maximum larger than `band`.
inline std::size_t count_drops(const Field& x, double band) {
  std::size_t bad = 0;
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    if (v < peak - band) ++bad;
    peak = std::max(peak, v);
  }
  return bad;
}

}  // namespace octoarm
