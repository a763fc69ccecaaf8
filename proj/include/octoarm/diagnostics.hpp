#pragma once

// Runtime monitors: neural Lyapunov functional, mechanical energy, tip curl,
// and reach classification.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "octoarm/core.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/neural_cable.hpp"
#include "octoarm/rod_dynamics.hpp"
#include "octoarm/sensing.hpp"

namespace octoarm {

/// 1/2 int tau (V - Vr)^2 + tau~ (W - b g(Vr))^2 ds.
inline double lyapunov_neural(const Field& V, const Field& W, const Field& V_ref, const CableParams& params,
                              double ds) {
  Field f(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double dv = V[i] - V_ref[i];
    const double dw = W[i] - params.b * relu(V_ref[i]);
    f[i] = 0.5 * (params.tau * dv * dv + params.tau_tilde * dw * dw);
  }
  return trapezoid(f, ds);
}

/// Discrete Hamiltonian of the rod under a frozen couple u: node kinetic
/// energy, element rotational energy, and sum over nodes 0..n-1 of
/// ds (EI kappa^2 / 2 + u kappa). Its gradient is exactly the torque used by
/// RodIntegrator.
inline double mechanical_energy(const RodState& state, const Field& u, const RodIntegrator& rod) {
  const ArmGeometry& g = rod.geometry();
  const std::size_t n = state.theta.size();
  double kinetic = 0.0;
  for (std::size_t i = 1; i <= n; ++i) kinetic += 0.5 * rod.node_mass()[i] * dot(state.r_t[i], state.r_t[i]);
  for (std::size_t e = 0; e < n; ++e) kinetic += 0.5 * rod.element_inertia()[e] * state.theta_t[e] * state.theta_t[e];
  double potential = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = (state.theta[i] - prev) / g.ds;
    prev = state.theta[i];
    potential += g.ds * (0.5 * g.bending_stiffness(i) * k * k + u[i] * k);
  }
  return kinetic + potential;
}

inline double tip_curvature(const RodState& state, const ArmGeometry& geom) {
  return tip_curvature(state.curvature(geom.ds), geom);
}

enum class ReachStatus { touching, pointing, not_reached };

inline const char* to_string(ReachStatus s) {
  switch (s) {
    case ReachStatus::touching: return "touching";
    case ReachStatus::pointing: return "pointing";
    case ReachStatus::not_reached: return "not-reached";
  }
  return "?";
}

struct ReachTolerances {
  double distance = 0.0;     // [m]; 0 selects 0.01 L
  double alignment = 0.05;   // |sin alpha(s_bar)|
  double speed = 1e-4;       // [m/s]
  double reach_fraction = 0.95;
};

inline ReachStatus reach_status(const SensoryReading& reading, const RodState& state, const ArmGeometry& geom,
                                const ReachTolerances& tol = {}) {
  const double tol_d = tol.distance > 0.0 ? tol.distance : 0.01 * geom.length;
  if (reading.dist < tol_d) return ReachStatus::touching;
  const double align = std::abs(std::sin(reading.alpha[reading.closest]));
  if (align < tol.alignment && reading.s_bar / geom.length > tol.reach_fraction && state.max_speed() < tol.speed) {
    return ReachStatus::pointing;
  }
  return ReachStatus::not_reached;
}

struct DiagnosticsSample {
  double t = 0.0;
  std::optional<double> lyap_neural;  // only under reference tracking
  double energy = 0.0;
  double kappa_tip = 0.0;
  double s_bar_over_L = 0.0;
  ReachStatus reach = ReachStatus::not_reached;
  double max_speed = 0.0;
};

}  // namespace octoarm
