#pragma once

// Voltage -> muscle activation -> muscle couple.
//
//   sigma(V) = 1/2 (1 + tanh(-(1/40) artanh(-0.98 (V - 40))))
//
// The inner artanh is finite only inside the band |0.98 (V - 40)| < 1; outside
// it sigma takes its limits 0 and 1. Note that in double precision sigma is
// close to a three-level step: ~0.5 over most of the band and a jump to 0/1
// within a few 1e-14 mV of the band edges.

#include <cmath>
#include <cstddef>

#include "octoarm/core.hpp"
#include "octoarm/geometry.hpp"

namespace octoarm {

struct Activation {
  static constexpr double center = 40.0;        // [mV]
  static constexpr double gain = 0.98;          // inner slope [1/mV]
  static constexpr double exponent = 1.0 / 40.0;
  static constexpr double half_width = 1.0 / gain;  // [mV]
  /// Distance from |x| = 1 below which the saturated value is returned.
  /// Keeps voltages parked on a band edge from toggling between ~0.3 and 0.
  static constexpr double edge_guard = 1e-12;

  static constexpr double lower_edge() { return center - half_width; }
  static constexpr double upper_edge() { return center + half_width; }
};

inline double sigma(double voltage) {
  const double x = Activation::gain * (voltage - Activation::center);
  if (!(x < 1.0 - Activation::edge_guard)) return std::isnan(x) ? x : 1.0;
  if (!(x > -1.0 + Activation::edge_guard)) return 0.0;
  return 0.5 * (1.0 + std::tanh(-Activation::exponent * std::atanh(-x)));
}

/// Inverse activation; v in {0, 1} maps to the band edges.
inline double sigma_inv(double activation) {
  if (!(activation >= 0.0 && activation <= 1.0)) {
    throw DomainError("sigma_inv: activation must lie in [0, 1]");
  }
  return Activation::center +
         Activation::half_width * std::tanh(std::atanh(2.0 * activation - 1.0) / Activation::exponent);
}

struct MuscleCouples {
  Field top;
  Field bottom;
  Field net;  // bottom - top
};

/// u^m = c(s) sigma(V^m), net couple u = u^b - u^t.
inline MuscleCouples muscle_couples(const Field& v_top, const Field& v_bottom, const ArmGeometry& geom) {
  const std::size_t n = geom.nodes();
  if (v_top.size() != n || v_bottom.size() != n) {
    throw DomainError("muscle_couples: voltage fields must live on the arm grid");
  }
  MuscleCouples u{Field(n), Field(n), Field(n)};
  for (std::size_t i = 0; i < n; ++i) {
    u.top[i] = geom.max_couple[i] * sigma(v_top[i]);
    u.bottom[i] = geom.max_couple[i] * sigma(v_bottom[i]);
    u.net[i] = u.bottom[i] - u.top[i];
  }
  return u;
}

}  // namespace octoarm
