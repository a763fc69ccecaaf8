#pragma once

// Excitable cable with adaptation:
//
//   tau  V_t = lambda^2 V_ss - V - W + I
//   tau~ W_t = -W + b g(V),   g(x) = max(x, 0)
//
// Explicit Euler in time. The diffusion term uses the fourth-order five-point
// stencil; nodes next to a Dirichlet end fall back to the three-point stencil.
// Free ends are handled by even reflection (ghost nodes), which enforces
// V_s = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "octoarm/core.hpp"

namespace octoarm {

enum class Muscle { top, bottom };

inline const char* to_string(Muscle m) { return m == Muscle::top ? "top" : "bottom"; }

struct CableParams {
  double tau = 0.04;        // [s]
  double tau_tilde = 0.4;   // [s]
  double lambda = 0.1;      // [m]
  double b = 1.0;           // adaptation strength

  void validate() const {
    if (!(tau > 0.0)) throw ConfigError("cable.tau", "must be positive");
    if (!(tau_tilde > 0.0)) throw ConfigError("cable.tau_tilde", "must be positive");
    if (!(lambda > 0.0)) throw ConfigError("cable.lambda", "must be positive");
    if (!(b >= 0.0)) throw ConfigError("cable.b", "must be non-negative");
  }
  /// Length constant of the active (V > 0) branch, lambda / sqrt(1 + b).
  double active_length_constant() const { return lambda / std::sqrt(1.0 + b); }
};

struct BoundaryCondition {
  enum class Kind { fixed_fixed, free_free };
  Kind kind = Kind::free_free;
  double v_base = 0.0;  // [mV], fixed-fixed only
  double v_tip = 0.0;   // [mV], fixed-fixed only

  static BoundaryCondition fixed(double v0, double vl) { return {Kind::fixed_fixed, v0, vl}; }
  static BoundaryCondition free() { return {Kind::free_free, 0.0, 0.0}; }
  bool is_fixed() const { return kind == Kind::fixed_fixed; }
};

struct CableState {
  Field V;  // [mV]
  Field W;  // [mV]
  Muscle muscle = Muscle::top;

  static CableState zeros(std::size_t nodes, Muscle m) { return {Field(nodes, 0.0), Field(nodes, 0.0), m}; }
};

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// lambda^2 V_ss on a uniform grid, honouring the boundary condition.
inline void cable_diffusion(const Field& V, double ds, double lambda, const BoundaryCondition& bc, Field& out) {
  const std::size_t n = V.size();
  out.assign(n, 0.0);
  if (n < 5) throw DomainError("cable_diffusion: need at least five nodes");
  const double k4 = lambda * lambda / (12.0 * ds * ds);
  const double k2 = lambda * lambda / (ds * ds);
  const double* v = V.data();
  for (std::size_t i = 2; i + 2 < n; ++i) {
    out[i] = k4 * (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]);
  }
  const std::size_t last = n - 1;
  if (bc.is_fixed()) {
    out[1] = k2 * (v[0] - 2.0 * v[1] + v[2]);
    out[last - 1] = k2 * (v[last - 2] - 2.0 * v[last - 1] + v[last]);
    return;
  }
  // even reflection: v[-j] = v[j], v[last + j] = v[last - j]
  out[0] = k4 * (-2.0 * v[2] + 32.0 * v[1] - 30.0 * v[0]);
  out[1] = k4 * (-v[1] + 16.0 * v[0] - 30.0 * v[1] + 16.0 * v[2] - v[3]);
  out[last] = k4 * (-2.0 * v[last - 2] + 32.0 * v[last - 1] - 30.0 * v[last]);
  out[last - 1] = k4 * (-v[last - 3] + 16.0 * v[last - 2] - 30.0 * v[last - 1] + 16.0 * v[last] - v[last - 1]);
}

/// Workspace-owning stepper; reusing one avoids per-step allocation.
class CableStepper {
 public:
  CableStepper(CableParams params, double ds) : params_(params), ds_(ds) { params_.validate(); }

  const CableParams& params() const { return params_; }
  CableParams& params() { return params_; }

  /// Advances one explicit step. `current` is I(s) in mV. Returns the max
  /// rates |V_t|, |W_t| observed over the step.
  std::pair<double, double> step(CableState& state, const Field& current, const BoundaryCondition& bc, double dt,
                                 std::size_t step_index = 0) {
    const std::size_t n = state.V.size();
    if (bc.is_fixed()) {
      state.V.front() = bc.v_base;
      state.V.back() = bc.v_tip;
    }
    cable_diffusion(state.V, ds_, params_.lambda, bc, lap_);
    double max_vt = 0.0;
    double max_wt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = state.V[i];
      const double w = state.W[i];
      const bool pinned = bc.is_fixed() && (i == 0 || i + 1 == n);
      const double vt = pinned ? 0.0 : (lap_[i] - v - w + current[i]) / params_.tau;
      const double wt = (-w + params_.b * relu(v)) / params_.tau_tilde;
      state.V[i] = v + dt * vt;
      state.W[i] = w + dt * wt;
      max_vt = std::max(max_vt, std::abs(vt));
      max_wt = std::max(max_wt, std::abs(wt));
    }
    if (!std::isfinite(max_vt) || !std::isfinite(max_wt) || !all_finite(state.V)) {
      throw IntegrationError(step_index, std::string("cable '") + to_string(state.muscle) + "' produced non-finite values");
    }
    return {max_vt, max_wt};
  }

 private:
  CableParams params_;
  double ds_;
  Field lap_;
};

/// One explicit step of the cable equations.
inline CableState step_cable(CableState state, const Field& current, const CableParams& params,
                             const BoundaryCondition& bc, double dt, double ds) {
  CableStepper stepper(params, ds);
  stepper.step(state, current, bc, dt);
  return state;
}

struct RelaxResult {
  CableState state;
  std::size_t steps = 0;
  double settling_time = 0.0;  // [s]
  double residual = 0.0;       // max(|V_t|, |W_t|) at exit [mV/s]
};

/// Steps with a fixed input until max |V_t| and |W_t| fall below `tol`.
inline RelaxResult relax_to_steady(CableState state, const Field& current, const CableParams& params,
                                   const BoundaryCondition& bc, double dt, double ds, double tol,
                                   std::size_t max_steps = 20'000'000) {
  if (!(tol > 0.0)) throw ConfigError("relax.tol", "must be positive");
  CableStepper stepper(params, ds);
  RelaxResult r;
  // Probe the rates without committing a step so a settled input returns at once.
  {
    CableState probe = state;
    const auto [vt, wt] = stepper.step(probe, current, bc, dt);
    r.residual = std::max(vt, wt);
    if (r.residual < tol) {
      if (bc.is_fixed()) {
        state.V.front() = bc.v_base;
        state.V.back() = bc.v_tip;
      }
      r.state = std::move(state);
      return r;
    }
  }
  while (r.steps < max_steps) {
    const auto [vt, wt] = stepper.step(state, current, bc, dt, r.steps);
    ++r.steps;
    r.residual = std::max(vt, wt);
    if (r.residual < tol) {
      r.settling_time = static_cast<double>(r.steps) * dt;
      r.state = std::move(state);
      return r;
    }
  }
  throw TimeoutError(r.residual, "relax_to_steady: no convergence after " + std::to_string(max_steps) +
                                     " steps (residual " + std::to_string(r.residual) + " mV/s)");
}

}  // namespace octoarm
