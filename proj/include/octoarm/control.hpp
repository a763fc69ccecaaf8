#pragma once

// Control laws.
//
// Sensory feedback (neural level):  I = -mu sin(alpha) 1{s <= s_bar}, split
// into I_top = -I where I <= 0 and I_bottom = I where I > 0.
// Benchmark (couple level):         u = -mu* sin(alpha) 1{s <= s_bar}, clipped
// to |u| <= c(s) and applied directly as the net couple.
// Reference tracking (neural level):
//   I = b g(V) + (1 - beta) V + beta Vr - lambda^2 (Vr)_ss,  Vr = sigma_inv(v_bar)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "octoarm/core.hpp"
#include "octoarm/coupling.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/neural_cable.hpp"
#include "octoarm/sensing.hpp"

namespace octoarm {

enum class ControlLaw { passive, benchmark, sensory_feedback, reference_tracking };

inline const char* to_string(ControlLaw law) {
  switch (law) {
    case ControlLaw::passive: return "passive";
    case ControlLaw::benchmark: return "benchmark";
    case ControlLaw::sensory_feedback: return "sensory-feedback";
    case ControlLaw::reference_tracking: return "reference-tracking";
  }
  return "?";
}

inline ControlLaw parse_control_law(const std::string& name) {
  if (name == "passive") return ControlLaw::passive;
  if (name == "benchmark") return ControlLaw::benchmark;
  if (name == "sensory-feedback") return ControlLaw::sensory_feedback;
  if (name == "reference-tracking") return ControlLaw::reference_tracking;
  throw ConfigError("control.law", "unknown law '" + name + "'");
}

struct ControlConfig {
  ControlLaw law = ControlLaw::sensory_feedback;
  double mu = 500.0;          // [mV] sensory feedback gain
  double mu_star = 0.0;       // [N m] benchmark gain; 0 selects the base max couple
  double beta = 10.0;         // tracking gain
  double epsilon = 1e-3;      // reference clamp
  double current_cap = 1e4;   // [mV] |I| cap for reference tracking

  void validate() const {
    if (!(mu >= 0.0)) throw ConfigError("control.mu", "must be non-negative");
    if (!(mu_star >= 0.0)) throw ConfigError("control.mu_star", "must be non-negative");
    if (!(beta > 0.0)) throw ConfigError("control.beta", "must be positive");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("control.epsilon", "must lie in (0, 0.5)");
    if (!(current_cap > 0.0)) throw ConfigError("control.current_cap", "must be positive");
  }
};

struct MuscleCurrents {
  Field top;
  Field bottom;
};

inline MuscleCurrents sensory_feedback_current(const SensoryReading& reading, double mu) {
  const std::size_t n = reading.alpha.size();
  MuscleCurrents out{Field(n, 0.0), Field(n, 0.0)};
  for (std::size_t i = 0; i <= reading.closest && i < n; ++i) {
    const double current = -mu * std::sin(reading.alpha[i]);
    if (current > 0.0) {
      out.bottom[i] = current;
    } else {
      out.top[i] = -current;
    }
  }
  return out;
}

inline Field benchmark_couple(const SensoryReading& reading, double mu_star, const ArmGeometry& geom) {
  const std::size_t n = reading.alpha.size();
  Field u(n, 0.0);
  for (std::size_t i = 0; i <= reading.closest && i < n; ++i) {
    const double c = geom.max_couple[i];
    u[i] = std::clamp(-mu_star * std::sin(reading.alpha[i]), -c, c);
  }
  return u;
}

struct ActivationReference {
  Field top;
  Field bottom;
};

inline ActivationReference couple_to_activation_reference(const Field& u_star, const ArmGeometry& geom,
                                                          double epsilon) {
  const std::size_t n = u_star.size();
  ActivationReference v{Field(n, epsilon), Field(n, epsilon)};
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = u_star[i] / geom.max_couple[i];
    if (ratio > 0.0) v.bottom[i] = std::clamp(ratio, epsilon, 1.0 - epsilon);
    if (ratio < 0.0) v.top[i] = std::clamp(-ratio, epsilon, 1.0 - epsilon);
  }
  return v;
}

/// Second derivative on a uniform grid: central inside, one-sided
/// second-order (four-point) at the ends.
inline Field second_derivative(const Field& f, double ds) {
  const std::size_t n = f.size();
  Field out(n, 0.0);
  if (n < 4) return out;
  const double h2 = ds * ds;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return out;
}

/// How the reference's diffusion term is discretized.
enum class ReferenceDiffusion {
  /// Central differences, one-sided at the ends.
  finite_difference,
  /// The cable's own discrete operator under the given boundary condition, so
  /// the reference is an exact fixed point of the discrete closed loop.
  matched,
};

/// Reference voltage Vr = sigma_inv(clamped v_bar) and lambda^2 (Vr)_ss.
struct TrackingReference {
  Field voltage;
  Field diffusion;
};

inline TrackingReference make_tracking_reference(const Field& v_bar, const CableParams& params, double epsilon,
                                                 double ds,
                                                 ReferenceDiffusion mode = ReferenceDiffusion::finite_difference,
                                                 const BoundaryCondition& bc = BoundaryCondition::free()) {
  TrackingReference ref;
  ref.voltage.resize(v_bar.size());
  for (std::size_t i = 0; i < v_bar.size(); ++i) ref.voltage[i] = sigma_inv(std::clamp(v_bar[i], epsilon, 1.0 - epsilon));
  if (mode == ReferenceDiffusion::matched) {
    cable_diffusion(ref.voltage, ds, params.lambda, bc, ref.diffusion);
  } else {
    ref.diffusion = second_derivative(ref.voltage, ds);
    for (double& d : ref.diffusion) d *= params.lambda * params.lambda;
  }
  return ref;
}

/// Writes I = b g(V) + (1 - beta) V + beta Vr - lambda^2 (Vr)_ss into `out`,
/// capped at |I| <= current_cap. Returns the number of capped nodes.
inline std::size_t tracking_current(const Field& V, const TrackingReference& ref, const CableParams& params,
                                    double beta, double current_cap, Field& out) {
  const std::size_t n = V.size();
  if (ref.voltage.size() != n) throw DomainError("tracking_current: reference must live on the arm grid");
  out.resize(n);
  std::size_t capped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double current = params.b * relu(V[i]) + (1.0 - beta) * V[i] + beta * ref.voltage[i] - ref.diffusion[i];
    if (std::abs(current) > current_cap) {
      current = std::copysign(current_cap, current);
      ++capped;
    }
    out[i] = current;
  }
  return capped;
}

struct TrackingCurrent {
  Field current;
  Field reference_voltage;  // sigma_inv of the clamped reference
  std::size_t capped = 0;   // nodes where the |I| cap was applied
};

inline TrackingCurrent reference_tracking_current(const Field& V, const Field& v_bar, const CableParams& params,
                                                  double beta, double epsilon, double ds,
                                                  ReferenceDiffusion mode = ReferenceDiffusion::finite_difference,
                                                  const BoundaryCondition& bc = BoundaryCondition::free(),
                                                  double current_cap = 1e4) {
  if (v_bar.size() != V.size()) throw DomainError("reference_tracking_current: reference must live on the arm grid");
  TrackingReference ref = make_tracking_reference(v_bar, params, epsilon, ds, mode, bc);
  TrackingCurrent out;
  out.capped = tracking_current(V, ref, params, beta, current_cap, out.current);
  out.reference_voltage = std::move(ref.voltage);
  return out;
}

}  // namespace octoarm
