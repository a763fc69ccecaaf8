#pragma once

// Validation suites run by the `validate` verb. Each suite measures one
// property against an independent reference and reports the worst residual.
//
//   bvp-oracle          closed-form rest voltages vs the finite-difference BVP
//   cable-fixed-points  relaxed cables vs analytic steady states
//   length-constant     decay constant of relaxed cables vs lambda/sqrt(1+b)
//   static-curvature    rod under a frozen couple vs kappa = -u/EI
//   rest-trends         monotone trends across the rest-shape grid and b sweep
//   energy-decay        passive release: Hamiltonian never increases
//   lyapunov            tracking with a constant reference: L0 monotone,
//                       convergence, decay rate; plus a low-gain run
//   time-scale          neural step settling vs mechanical settling
//   convergence         observed order of the shape reconstruction

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "octoarm/analysis.hpp"
#include "octoarm/bvp_oracle.hpp"
#include "octoarm/control.hpp"
#include "octoarm/diagnostics.hpp"
#include "octoarm/equilibrium.hpp"
#include "octoarm/harness.hpp"
#include "octoarm/rod_dynamics.hpp"
#include "octoarm/scenario.hpp"
#include "octoarm/sensing.hpp"

namespace octoarm {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
};

// ------------------------------------------------------------ bvp-oracle

struct OracleCase {
  double v0, vl, b;
};

/// Rest-shape grid, b sweep and sign-change cases.
inline std::vector<OracleCase> oracle_cases(const AtlasGrid& grid) {
  std::vector<OracleCase> cases;
  for (double v0 : grid.top_base) {
    for (double vl : grid.top_tip) cases.push_back({v0, vl, 1.0});
  }
  cases.push_back({grid.bottom_base, grid.bottom_tip, 1.0});
  for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    cases.push_back({40.0, 80.0, b});
    cases.push_back({40.0, 0.0, b});
  }
  for (double b : {0.0, 1.0}) {
    cases.push_back({10.0, -10.0, b});
    cases.push_back({40.0, -20.0, b});
  }
  return cases;
}

inline SuiteResult suite_bvp_oracle(const Scenario& sc) {
  SuiteResult r;
  r.name = "bvp-oracle";
  r.tolerance = 1e-6;
  double worst = 0.0;
  for (const OracleCase& c : oracle_cases(sc.atlas)) {
    CableParams p = sc.cable;
    p.b = c.b;
    const EquilibriumVoltage eq = solve_voltage_equilibrium(c.v0, c.vl, p, sc.geometry.length);
    const BvpSolution ref = solve_rest_voltage_bvp(c.v0, c.vl, p.lambda, c.b, sc.geometry.length);
    double err = 0.0;
    for (std::size_t i = 0; i < ref.s.size(); ++i) err = std::max(err, std::abs(eq(ref.s[i]) - ref.V[i]));
    worst = std::max(worst, err);
    r.data["cases"].push_back({{"v0", c.v0}, {"vl", c.vl}, {"b", c.b}, {"max_error", err}});
  }
  r.metric = worst;
  r.passed = worst <= r.tolerance;
  r.detail = "max |V_closed - V_oracle| over " + std::to_string(r.data["cases"].size()) + " cases [mV]";
  return r;
}

// ------------------------------------------------------------ cables

inline SuiteResult suite_cable_fixed_points(const Scenario& sc) {
  SuiteResult r;
  r.name = "cable-fixed-points";
  const ArmGeometry geom = build_arm(sc.geometry);
  const std::size_t n = geom.nodes();
  const double dt = suggest_dt(geom, sc.cable.tau, sc.cable.lambda);

  CableParams p = sc.cable;
  p.b = 1.0;
  const double i0 = 60.0;
  const auto free = relax_to_steady(CableState::zeros(n, Muscle::top), Field(n, i0), p,
                                    BoundaryCondition::free(), dt, geom.ds, 1e-6);
  const double v_star = i0 / (1.0 + p.b);
  double err_free = 0.0;
  for (double v : free.state.V) err_free = std::max(err_free, std::abs(v - v_star));

  p.b = 0.0;
  const auto fixed = relax_to_steady(CableState::zeros(n, Muscle::top), Field(n, 0.0), p,
                                     BoundaryCondition::fixed(40.0, 0.0), dt, geom.ds, 1e-6);
  const double ell = p.lambda;
  const double half = 40.0 * std::sinh(0.5 * geom.length / ell) / std::sinh(geom.length / ell);
  const std::size_t mid = n / 2;
  const double v_mid = fixed.state.V[mid];

  r.metric = std::max(err_free / 1e-4, std::abs(v_mid - half) / 0.01);
  r.tolerance = 1.0;
  r.passed = err_free <= 1e-4 && std::abs(v_mid - 12.962) <= 0.01 && (n % 2 == 1);
  r.data = {{"free_free_max_error", err_free},  {"free_free_settling", free.settling_time},
            {"fixed_fixed_mid", v_mid},         {"fixed_fixed_analytic_mid", half},
            {"fixed_fixed_settling", fixed.settling_time}};
  r.detail = "free-free |V-30| = " + format_number(err_free) + " mV, fixed-fixed V(L/2) = " + format_number(v_mid) +
             " mV";
  return r;
}

inline SuiteResult suite_length_constant(const Scenario& sc) {
  SuiteResult r;
  r.name = "length-constant";
  r.tolerance = 0.01;
  const ArmGeometry geom = build_arm(sc.geometry);
  const std::size_t n = geom.nodes();
  const double dt = suggest_dt(geom, sc.cable.tau, sc.cable.lambda);
  double worst = 0.0;
  for (double b : {0.0, 1.0, 3.0}) {
    CableParams p = sc.cable;
    p.b = b;
    const auto relaxed = relax_to_steady(CableState::zeros(n, Muscle::top), Field(n, 0.0), p,
                                         BoundaryCondition::fixed(40.0, 0.0), dt, geom.ds, 1e-7);
    const double fitted = fit_length_constant(relaxed.state.V, geom.ds, 2, n - 3);
    const double expected = p.active_length_constant();
    const double rel = std::abs(fitted / expected - 1.0);
    worst = std::max(worst, rel);
    r.data["fits"].push_back({{"b", b}, {"fitted", fitted}, {"expected", expected}, {"relative_error", rel}});
  }
  r.metric = worst;
  r.passed = worst <= r.tolerance;
  r.detail = "max relative error of the fitted length constant";
  return r;
}

// ------------------------------------------------------------ rest shapes

struct RestTrendCounts {
  std::size_t tip_violations = 0;   // kappa_tip decreasing in top_tip
  std::size_t base_violations = 0;  // base |kappa| decreasing in top_base
  std::size_t sweep_violations = 0; // total curl not strictly decreasing in b
  std::size_t failed_cells = 0;
};

/// Trends across the rest-shape grid (b = 1) and the b sweep at top
/// (40, 80), bottom (40, 0).
inline RestTrendCounts rest_trends(const Scenario& sc, nlohmann::ordered_json* data = nullptr) {
  RestTrendCounts out;
  Scenario grid = sc;
  grid.kind = ScenarioKind::atlas;
  grid.atlas.b = {1.0};
  const std::vector<AtlasCell> cells = compute_atlas(grid, 1);
  const std::size_t nb = grid.atlas.top_base.size();
  const std::size_t nl = grid.atlas.top_tip.size();
  auto cell = [&](std::size_t i0, std::size_t il) -> const AtlasCell& { return cells[i0 * nl + il]; };
  for (const auto& c : cells) {
    if (!c.shape) ++out.failed_cells;
  }
  if (out.failed_cells > 0) return out;
  for (std::size_t i0 = 0; i0 < nb; ++i0) {
    for (std::size_t il = 1; il < nl; ++il) {
      if (cell(i0, il).shape->kappa_tip < cell(i0, il - 1).shape->kappa_tip) ++out.tip_violations;
    }
  }
  for (std::size_t il = 0; il < nl; ++il) {
    for (std::size_t i0 = 1; i0 < nb; ++i0) {
      if (cell(i0, il).shape->base_mean < cell(i0 - 1, il).shape->base_mean) ++out.base_violations;
    }
  }
  Scenario sweep = sc;
  sweep.kind = ScenarioKind::atlas;
  sweep.atlas.top_base = {40.0};
  sweep.atlas.top_tip = {80.0};
  sweep.atlas.bottom_base = 40.0;
  sweep.atlas.bottom_tip = 0.0;
  sweep.atlas.b = {0.0, 0.5, 1.0, 1.5, 2.0};
  const std::vector<AtlasCell> row = compute_atlas(sweep, 1);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!row[i].shape) {
      ++out.failed_cells;
      continue;
    }
    if (i > 0 && row[i - 1].shape && !(row[i].shape->curl < row[i - 1].shape->curl)) ++out.sweep_violations;
  }
  if (data) {
    for (const auto& c : cells) {
      (*data)["grid"].push_back({{"top_base", c.voltages.top_base},
                                 {"top_tip", c.voltages.top_tip},
                                 {"kappa_tip", c.shape->kappa_tip},
                                 {"base_mean", c.shape->base_mean}});
    }
    for (const auto& c : row) {
      if (c.shape) (*data)["sweep"].push_back({{"b", c.b}, {"curl", c.shape->curl}});
    }
  }
  return out;
}

inline SuiteResult suite_rest_trends(const Scenario& sc) {
  SuiteResult r;
  r.name = "rest-trends";
  const RestTrendCounts c = rest_trends(sc, &r.data);
  const std::size_t total = c.tip_violations + c.base_violations + c.sweep_violations + c.failed_cells;
  r.metric = static_cast<double>(total);
  r.tolerance = 0.0;
  r.passed = total == 0;
  r.detail = "trend violations: tip " + std::to_string(c.tip_violations) + ", base " +
             std::to_string(c.base_violations) + ", sweep " + std::to_string(c.sweep_violations) +
             ", failed cells " + std::to_string(c.failed_cells);
  return r;
}

// ------------------------------------------------------------ rod

/// Frozen couple used by the static and energy suites: half the local
/// maximum couple.
inline Field half_max_couple(const ArmGeometry& geom) {
  Field u(geom.nodes());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * geom.max_couple[i];
  return u;
}

struct StaticRelaxation {
  double max_relative_error = 0.0;  // interior nodes
  double time = 0.0;
  std::size_t steps = 0;
  double final_rate = 0.0;          // max |theta_t| at exit [rad/s]
};

/// Relaxes a straight rod under `u` without drag until every angular rate is
/// below `rest_rate` (or `horizon` seconds pass).
inline StaticRelaxation relax_rod_statically(const ArmGeometry& geom, RotationalDamping damping, const Field& u,
                                             double rest_rate, double horizon) {
  RodIntegrator rod(geom, DragModel::none(), damping);
  const double dt = suggest_dt_bounds(geom, 0.0, 0.0).elastic;
  RodState st = RodState::straight(static_cast<std::size_t>(geom.elements), geom.ds);
  const auto max_steps = static_cast<std::size_t>(std::ceil(horizon / dt));
  StaticRelaxation out;
  while (out.steps < max_steps) {
    rod.step(st, u, dt, out.steps++);
    if (out.steps % 1000 == 0 && max_abs(st.theta_t) < rest_rate) break;
  }
  out.time = static_cast<double>(out.steps) * dt;
  out.final_rate = max_abs(st.theta_t);
  const Field kappa = st.curvature(geom.ds);
  for (std::size_t i = 1; i + 1 < geom.nodes(); ++i) {
    const double target = -u[i] / geom.bending_stiffness(i);
    out.max_relative_error = std::max(out.max_relative_error, std::abs(kappa[i] / target - 1.0));
  }
  return out;
}

inline constexpr double kRestRate = 1e-4;        // [rad/s]
inline constexpr double kStaticHorizon = 1000.0;  // [s]

inline SuiteResult suite_static_curvature(const Scenario& sc) {
  SuiteResult r;
  r.name = "static-curvature";
  r.tolerance = 0.01;
  const ArmGeometry geom = build_arm(sc.geometry);
  const StaticRelaxation s = relax_rod_statically(geom, sc.rotational_damping, half_max_couple(geom), kRestRate, kStaticHorizon);
  r.metric = s.max_relative_error;
  r.passed = r.metric <= r.tolerance;
  r.data = {{"time", s.time}, {"steps", s.steps}, {"final_rate", s.final_rate}};
  r.detail = "max relative curvature error on interior nodes once at rest (" + format_number(s.time) + " s)";
  return r;
}

struct EnergyRelease {
  Field t;
  Field energy;
  std::size_t increases = 0;
};

/// Releases the rest shape of `v` with no couple and no drag and samples the
/// Hamiltonian every `cadence` seconds.
inline EnergyRelease passive_release(const ArmGeometry& geom, const CableParams& cable, RotationalDamping damping,
                                     const RestVoltages& v, double duration, double cadence) {
  const RestShape rest = rest_shape(v, cable, geom);
  RodIntegrator rod(geom, DragModel::none(), damping);
  RodState st = RodState::at_rest(rest.centerline.element_angle, geom.ds);
  const Field u(geom.nodes(), 0.0);
  const double dt = suggest_dt_bounds(geom, 0.0, 0.0).elastic;
  const auto per = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cadence / dt)));
  const auto samples = static_cast<std::size_t>(std::llround(duration / cadence));
  EnergyRelease out;
  std::size_t step = 0;
  for (std::size_t k = 0; k <= samples; ++k) {
    if (k > 0) {
      for (std::size_t j = 0; j < per; ++j) rod.step(st, u, dt, step++);
    }
    out.t.push_back(static_cast<double>(step) * dt);
    out.energy.push_back(mechanical_energy(st, u, rod));
  }
  out.increases = count_increases(out.energy, 0.0);
  return out;
}

inline SuiteResult suite_energy_decay(const Scenario& sc) {
  SuiteResult r;
  r.name = "energy-decay";
  const ArmGeometry geom = build_arm(sc.geometry);
  const EnergyRelease e = passive_release(geom, sc.cable, sc.rotational_damping, sc.initial, 10.0, sc.time.cadence);
  r.metric = static_cast<double>(e.increases);
  r.tolerance = 0.0;
  r.passed = e.increases == 0;
  r.data = {{"samples", e.energy.size()}, {"initial", e.energy.front()}, {"final", e.energy.back()}};
  r.detail = "sample-to-sample increases of the Hamiltonian";
  return r;
}

// ------------------------------------------------------------ lyapunov

struct TrackingTransient {
  Field t;
  Field lyapunov;                 // every neural step
  double terminal_error = 0.0;    // max |V - Vr| over both cables [mV]
  std::size_t increases = 0;      // beyond 1e-10 relative per step
  double decay_rate = 0.0;        // mean -d log L0 / dt over the transient [1/s]
};

/// Neural closed loop under a constant reference: the benchmark couple of
/// the initial rest pose, mapped to activations. Cables start from the rest
/// voltages with free-free ends.
inline TrackingTransient tracking_transient(const Scenario& sc, double beta, double duration) {
  const ArmGeometry geom = build_arm(sc.geometry);
  const RestShape rest = rest_shape(sc.initial, sc.cable, geom);
  const RodState pose = RodState::at_rest(rest.centerline.element_angle, geom.ds);
  const SensoryReading reading = sense(pose.r, pose.theta, geom.s, sc.target);
  const double mu_star = sc.control.mu_star > 0.0 ? sc.control.mu_star : geom.max_couple_base;
  const ActivationReference act =
      couple_to_activation_reference(benchmark_couple(reading, mu_star, geom), geom, sc.control.epsilon);
  const BoundaryCondition bc = BoundaryCondition::free();
  const TrackingReference ref_top =
      make_tracking_reference(act.top, sc.cable, sc.control.epsilon, geom.ds, ReferenceDiffusion::matched, bc);
  const TrackingReference ref_bottom =
      make_tracking_reference(act.bottom, sc.cable, sc.control.epsilon, geom.ds, ReferenceDiffusion::matched, bc);

  CableState top{rest.v_top, Field(geom.nodes()), Muscle::top};
  CableState bottom{rest.v_bottom, Field(geom.nodes()), Muscle::bottom};
  for (std::size_t i = 0; i < geom.nodes(); ++i) {
    top.W[i] = sc.cable.b * relu(top.V[i]);
    bottom.W[i] = sc.cable.b * relu(bottom.V[i]);
  }
  CableStepper st_top(sc.cable, geom.ds);
  CableStepper st_bottom(sc.cable, geom.ds);
  const double dt = sc.time.dt > 0.0 ? sc.time.dt : suggest_dt(geom, sc.cable.tau, sc.cable.lambda);
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  auto lyap = [&] {
    return lyapunov_neural(top.V, top.W, ref_top.voltage, sc.cable, geom.ds) +
           lyapunov_neural(bottom.V, bottom.W, ref_bottom.voltage, sc.cable, geom.ds);
  };
  TrackingTransient out;
  out.t.reserve(steps + 1);
  out.lyapunov.reserve(steps + 1);
  out.t.push_back(0.0);
  out.lyapunov.push_back(lyap());
  Field i_top, i_bottom;
  for (std::size_t k = 0; k < steps; ++k) {
    tracking_current(top.V, ref_top, sc.cable, beta, sc.control.current_cap, i_top);
    tracking_current(bottom.V, ref_bottom, sc.cable, beta, sc.control.current_cap, i_bottom);
    st_top.step(top, i_top, bc, dt, k);
    st_bottom.step(bottom, i_bottom, bc, dt, k);
    out.t.push_back(static_cast<double>(k + 1) * dt);
    out.lyapunov.push_back(lyap());
  }
  for (std::size_t i = 0; i < geom.nodes(); ++i) {
    out.terminal_error = std::max({out.terminal_error, std::abs(top.V[i] - ref_top.voltage[i]),
                                   std::abs(bottom.V[i] - ref_bottom.voltage[i])});
  }
  out.increases = count_increases(out.lyapunov, 1e-10);
  // mean decay rate while L0 falls from its start to 1e-8 of it
  const double l0 = out.lyapunov.front();
  std::size_t end = out.lyapunov.size() - 1;
  for (std::size_t k = 0; k < out.lyapunov.size(); ++k) {
    if (out.lyapunov[k] < 1e-8 * l0) {
      end = k;
      break;
    }
  }
  if (end > 0 && out.lyapunov[end] > 0.0) out.decay_rate = std::log(l0 / out.lyapunov[end]) / out.t[end];
  return out;
}

inline SuiteResult suite_lyapunov(const Scenario& sc) {
  SuiteResult r;
  r.name = "lyapunov";
  const double beta_hi = sc.control.beta;
  const double b = sc.cable.b;
  const double k = 1.0 / sc.cable.tau_tilde;
  const TrackingTransient hi = tracking_transient(sc, beta_hi, 10.0);
  const TrackingTransient lo = tracking_transient(sc, 1.0, 10.0);
  const bool monotone_hyp = beta_hi > (b + 1.0) * (b + 1.0) / 4.0 + b;
  const bool rate_hyp = beta_hi > (b + 1.0) * (b + 1.0) / 2.0 + b + k * sc.cable.tau / 2.0;
  const bool ok_monotone = !monotone_hyp || hi.increases == 0;
  const bool ok_rate = !rate_hyp || hi.decay_rate >= 0.8 * k;
  r.passed = ok_monotone && ok_rate && hi.terminal_error < 0.1 && lo.terminal_error < 0.1;
  r.metric = std::max(hi.terminal_error, lo.terminal_error);
  r.tolerance = 0.1;
  r.data = {{"beta", beta_hi},
            {"increases", hi.increases},
            {"decay_rate", hi.decay_rate},
            {"rate_bound", 0.8 * k},
            {"terminal_error", hi.terminal_error},
            {"low_gain_beta", 1.0},
            {"low_gain_terminal_error", lo.terminal_error},
            {"low_gain_increases", lo.increases}};
  r.detail = "L0 increases " + std::to_string(hi.increases) + ", decay rate " + format_number(hi.decay_rate) +
             " 1/s, terminal errors " + format_number(hi.terminal_error) + " / " + format_number(lo.terminal_error) +
             " mV";
  return r;
}

// ------------------------------------------------------------ time scales

inline double mechanical_settling(const ReachingRun& run, double fraction = 0.01) {
  Field t, d;
  const Vec2 last = run.tip.back();
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    t.push_back(run.samples[i].t);
    d.push_back(norm(run.tip[i] - last));
  }
  return settling_time(t, d, fraction);
}

inline StepResponse neural_settling(const Scenario& sc) {
  const ArmGeometry geom = build_arm(sc.geometry);
  const double dt = suggest_dt(geom, sc.cable.tau, sc.cable.lambda);
  return neural_step_settling(sc.cable, geom.nodes(), geom.ds, 60.0, dt, 5.0);
}

inline SuiteResult suite_time_scale(const Scenario& sc) {
  SuiteResult r;
  r.name = "time-scale";
  Scenario reach = sc;
  reach.kind = ScenarioKind::reaching;
  const StepResponse neural = neural_settling(sc);
  const ReachingRun run = simulate_reaching(reach);
  const double mech = mechanical_settling(run);
  r.metric = mech / neural.settling_time;
  r.tolerance = 10.0;
  r.passed = !run.error && r.metric >= r.tolerance;
  r.data = {{"neural_settling", neural.settling_time}, {"mechanical_settling", mech}, {"duration", sc.time.duration}};
  r.detail = "mechanical / neural settling time ratio (must be >= 10)";
  return r;
}

// ------------------------------------------------------------ convergence

/// Observed order of the tip position of reconstruct_shape for a smooth
/// curvature field, from grids n, 2n, 4n against a 64n reference.
inline SuiteResult suite_convergence(const Scenario& sc) {
  SuiteResult r;
  r.name = "convergence";
  auto tip = [&](int elements) {
    GeometryConfig cfg = sc.geometry;
    cfg.elements = elements;
    const ArmGeometry g = build_arm(cfg);
    Field kappa(g.nodes());
    for (std::size_t i = 0; i < kappa.size(); ++i) {
      const double x = g.s[i] / g.length;
      kappa[i] = (2.0 * kPi / g.length) * (1.0 + x + std::sin(kPi * x));
    }
    return reconstruct_shape(kappa, g).position.back();
  };
  const int n = sc.geometry.elements;
  const Vec2 ref = tip(64 * n);
  const double e1 = norm(tip(n) - ref);
  const double e2 = norm(tip(2 * n) - ref);
  const double e3 = norm(tip(4 * n) - ref);
  const double order_a = std::log2(e1 / e2);
  const double order_b = std::log2(e2 / e3);
  r.metric = std::min(order_a, order_b);
  r.tolerance = 1.0;
  r.passed = r.metric >= r.tolerance;
  r.data = {{"elements", n}, {"errors", {e1, e2, e3}}, {"orders", {order_a, order_b}}};
  r.detail = "observed order of the reconstructed tip position";
  return r;
}

// ------------------------------------------------------------ driver

struct SuiteEntry {
  const char* name;
  std::function<SuiteResult(const Scenario&)> run;
};

inline const std::vector<SuiteEntry>& validation_suites() {
  static const std::vector<SuiteEntry> suites = {
      {"bvp-oracle", suite_bvp_oracle},           {"cable-fixed-points", suite_cable_fixed_points},
      {"length-constant", suite_length_constant}, {"static-curvature", suite_static_curvature},
      {"rest-trends", suite_rest_trends},                   {"energy-decay", suite_energy_decay},
      {"lyapunov", suite_lyapunov},               {"time-scale", suite_time_scale},
      {"convergence", suite_convergence},
  };
  return suites;
}

struct ValidationReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
  }
};

/// Runs the selected suites (all when the scenario lists none). Unknown
/// names are configuration errors and are reported before anything runs.
inline ValidationReport run_validation(const Scenario& sc,
                                       const std::function<void(const SuiteResult&)>& progress = {}) {
  sc.validate();
  std::vector<const SuiteEntry*> chosen;
  for (const auto& e : validation_suites()) {
    if (sc.suites.empty() || std::find(sc.suites.begin(), sc.suites.end(), e.name) != sc.suites.end()) {
      chosen.push_back(&e);
    }
  }
  for (const auto& name : sc.suites) {
    const bool known = std::any_of(validation_suites().begin(), validation_suites().end(),
                                   [&](const SuiteEntry& e) { return name == e.name; });
    if (!known) throw ConfigError("validation.suites", "unknown suite '" + name + "'");
  }
  ValidationReport rep;
  for (const SuiteEntry* e : chosen) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult res;
    try {
      res = e->run(sc);
    } catch (const Error& err) {
      res.name = e->name;
      res.passed = false;
      res.detail = std::string("error: ") + err.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) progress(res);
    rep.suites.push_back(std::move(res));
  }
  return rep;
}

inline nlohmann::ordered_json to_json(const ValidationReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["passed"] = rep.passed();
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& s : rep.suites) {
    j["suites"].push_back({{"name", s.name},
                           {"passed", s.passed},
                           {"metric", s.metric},
                           {"tolerance", s.tolerance},
                           {"seconds", s.seconds},
                           {"detail", s.detail},
                           {"data", s.data}});
  }
  return j;
}

}  // namespace octoarm
