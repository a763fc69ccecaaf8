// Acceptance run: one line per primary criterion, at the stated tolerance.
//
// Exit status is nonzero when a criterion fails that is not listed in
// kKnownFailures. Known failures still print FAIL; the analysis is in the
// README under "Known failures".

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "octoarm/octoarm.hpp"

using namespace octoarm;

namespace {

const std::set<std::string> kKnownFailures = {"reaching"};

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget;  // [s]
  std::function<Outcome()> run;
};

std::string fmt(double x, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

Scenario config(const char* file) { return load_scenario(std::string(OCTOARM_CONFIG_DIR) + "/" + file); }

// Oracle values written independently of the library.
double sinh_profile(double v0, double ell, double length, double s) {
  return v0 * std::sinh((length - s) / ell) / std::sinh(length / ell);
}

Outcome check_closed_form_vs_oracle() {
  std::vector<std::array<double, 3>> cases;
  for (double v0 : {30.0, 40.0, 50.0, 60.0}) {
    for (double vl : {60.0, 80.0, 100.0, 120.0}) cases.push_back({v0, vl, 1.0});
  }
  cases.push_back({40.0, 0.0, 1.0});
  for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) cases.push_back({40.0, 80.0, b});
  for (double b : {0.0, 1.0}) {
    cases.push_back({10.0, -10.0, b});
    cases.push_back({40.0, -20.0, b});
  }
  double worst = 0.0;
  for (const auto& [v0, vl, b] : cases) {
    CableParams p;
    p.b = b;
    const EquilibriumVoltage eq = solve_voltage_equilibrium(v0, vl, p, 0.2);
    BvpOracleOptions opts;
    opts.intervals = 2000;
    const BvpSolution ref = solve_rest_voltage_bvp(v0, vl, p.lambda, b, 0.2, opts);
    for (std::size_t i = 0; i < ref.s.size(); ++i) worst = std::max(worst, std::abs(eq(ref.s[i]) - ref.V[i]));
  }
  return {worst <= 1e-6, "max error " + fmt(worst) + " mV over " + std::to_string(cases.size()) + " cases (tol 1e-6)"};
}

Outcome check_cable_fixed_points() {
  const ArmGeometry g = build_arm({});
  const std::size_t n = g.nodes();
  const double dt = suggest_dt(g, 0.04, 0.1);
  CableParams p;
  p.b = 1.0;
  const auto free = relax_to_steady(CableState::zeros(n, Muscle::top), Field(n, 60.0), p, BoundaryCondition::free(),
                                    dt, g.ds, 1e-7);
  double err = 0.0;
  for (double v : free.state.V) err = std::max(err, std::abs(v - 30.0));
  p.b = 0.0;
  const auto fixed = relax_to_steady(CableState::zeros(n, Muscle::top), Field(n, 0.0), p,
                                     BoundaryCondition::fixed(40.0, 0.0), dt, g.ds, 1e-7);
  const double mid = fixed.state.V[n / 2];
  const double analytic = sinh_profile(40.0, 0.1, 0.2, 0.1);
  const bool ok = err <= 1e-4 && std::abs(mid - 12.962) <= 0.01 && std::abs(g.s[n / 2] - 0.1) < 1e-12;
  return {ok, "free-free max|V-30| " + fmt(err) + " mV (tol 1e-4); V(L/2) " + fmt(mid, "%.5f") + " mV (analytic " +
                  fmt(analytic, "%.5f") + ", 12.962 +- 0.01)"};
}

Outcome check_length_constant() {
  const ArmGeometry g = build_arm({});
  const std::size_t n = g.nodes();
  const double dt = suggest_dt(g, 0.04, 0.1);
  double worst = 0.0;
  std::string fits;
  for (double b : {0.0, 1.0, 3.0}) {
    CableParams p;
    p.b = b;
    const auto relaxed = relax_to_steady(CableState::zeros(n, Muscle::top), Field(n, 0.0), p,
                                         BoundaryCondition::fixed(40.0, 0.0), dt, g.ds, 1e-7);
    // V = A e^{s/l} + B e^{-s/l} on a uniform grid: V_{i-1} + V_{i+1} = 2 cosh(ds/l) V_i
    double num = 0.0, den = 0.0;
    for (std::size_t i = 2; i + 3 < n; ++i) {
      num += relaxed.state.V[i] * (relaxed.state.V[i - 1] + relaxed.state.V[i + 1]);
      den += 2.0 * relaxed.state.V[i] * relaxed.state.V[i];
    }
    const double fitted = g.ds / std::acosh(num / den);
    const double expected = 0.1 / std::sqrt(b + 1.0);
    worst = std::max(worst, std::abs(fitted / expected - 1.0));
    fits += " b=" + fmt(b) + ":" + fmt(fitted, "%.6f");
  }
  return {worst <= 0.01, "max relative error " + fmt(worst) + " (tol 0.01);" + fits};
}

Outcome check_static_rod() {
  const ArmGeometry g = build_arm({});
  Field u(g.nodes());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * g.max_couple[i];
  RodIntegrator rod(g, DragModel::none());
  const double dt = suggest_dt_bounds(g, 0.0, 0.0).elastic;
  RodState st = RodState::straight(static_cast<std::size_t>(g.elements), g.ds);
  // run until at rest (max |theta_t| < 1e-4 rad/s) or 1000 s
  std::size_t steps = 0;
  const auto cap = static_cast<std::size_t>(1000.0 / dt);
  while (steps < cap) {
    rod.step(st, u, dt, steps++);
    if (steps % 1000 == 0 && max_abs(st.theta_t) < 1e-4) break;
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < g.nodes(); ++i) {
    const double ei = g.youngs_modulus * kPi * std::pow(g.radius[i], 4) / 4.0;
    const double kappa = (st.theta[i] - st.theta[i - 1]) / g.ds;
    worst = std::max(worst, std::abs(kappa / (-u[i] / ei) - 1.0));
  }
  return {worst <= 0.01, "max interior relative error " + fmt(worst) + " (tol 0.01) at rest after " +
                             fmt(static_cast<double>(steps) * dt, "%.1f") + " s simulated"};
}

Outcome check_rest_trends() {
  const ArmGeometry g = build_arm({});
  const double top_base[] = {30, 40, 50, 60};
  const double top_tip[] = {60, 80, 100, 120};
  CableParams p;
  RestShape grid[4][4];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) grid[i][j] = rest_shape({top_base[i], top_tip[j], 40.0, 0.0}, p, g);
  }
  int tip = 0, base = 0, sweep = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 1; j < 4; ++j) tip += grid[i][j].kappa_tip < grid[i][j - 1].kappa_tip;
  }
  for (int j = 0; j < 4; ++j) {
    for (int i = 1; i < 4; ++i) base += grid[i][j].base_mean < grid[i - 1][j].base_mean;
  }
  double prev = INFINITY;
  for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    p.b = b;
    const double curl = rest_shape({40.0, 80.0, 40.0, 0.0}, p, g).curl;
    sweep += !(curl < prev);
    prev = curl;
  }
  return {tip + base + sweep == 0, "violations: tip " + std::to_string(tip) + ", base " + std::to_string(base) +
                                       ", adaptation sweep " + std::to_string(sweep)};
}

Outcome check_lyapunov() {
  Scenario sc = config("reach_reference_tracking.yaml");
  const TrackingTransient hi = tracking_transient(sc, 10.0, 10.0);
  const TrackingTransient lo = tracking_transient(sc, 1.0, 10.0);
  std::size_t increases = 0;
  for (std::size_t k = 1; k < hi.lyapunov.size(); ++k) {
    if (hi.lyapunov[k] > hi.lyapunov[k - 1] * (1.0 + 1e-10)) ++increases;
  }
  const bool ok = increases == 0 && hi.terminal_error < 0.1 && lo.terminal_error < 0.1;
  return {ok, "beta=10: " + std::to_string(increases) + " increases over " + std::to_string(hi.lyapunov.size() - 1) +
                  " steps, terminal error " + fmt(hi.terminal_error) + " mV; beta=1: terminal error " +
                  fmt(lo.terminal_error) + " mV (tol 0.1)"};
}

ReachingRun& sensory_run() {
  static ReachingRun run = simulate_reaching(config("reach_sensory_feedback.yaml"));
  return run;
}

Field s_bar_series(const ReachingRun& run) {
  Field s;
  for (const auto& d : run.samples) s.push_back(d.s_bar_over_L);
  return s;
}

Outcome check_reaching() {
  const ReachingRun& run = sensory_run();
  if (run.error) return {false, "integration error: " + *run.error};
  const Field s = s_bar_series(run);
  const std::size_t start = s.size() / 10;
  std::size_t drops = 0;
  double peak = s[start];
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < peak - 0.02) ++drops;
    peak = std::max(peak, s[i]);
  }
  const double k0 = std::abs(run.samples.front().kappa_tip);
  const double k1 = std::abs(run.samples.back().kappa_tip);
  const bool pointing = run.final_status == ReachStatus::pointing;
  const bool ok = pointing && drops == 0 && s.back() > 0.95 && k1 < 0.25 * k0;
  return {ok, std::string("final status ") + to_string(run.final_status) + " (need pointing); s_bar/L drops " +
                  std::to_string(drops) + ", final " + fmt(s.back(), "%.3f") + " (> 0.95); |kappa_tip| " +
                  fmt(k0, "%.2f") + " -> " + fmt(k1, "%.2f") + " (< 25%); final max speed " +
                  fmt(run.samples.back().max_speed) + " m/s"};
}

Outcome check_tracking_vs_benchmark() {
  const ReachingRun track = simulate_reaching(config("reach_reference_tracking.yaml"));
  const ReachingRun bench = simulate_reaching(config("reach_benchmark.yaml"));
  if (track.error || bench.error) return {false, "integration error"};
  const Field a = s_bar_series(track);
  const Field b = s_bar_series(bench);
  const std::size_t n = std::min(a.size(), b.size());
  double worst = 0.0;
  for (std::size_t i = n / 5; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return {worst <= 0.1, "max |s_bar/L difference| after 20% " + fmt(worst) + " (tol 0.1)"};
}

Outcome check_passive_energy() {
  const ArmGeometry g = build_arm({});
  const EnergyRelease e = passive_release(g, CableParams{}, RotationalDamping::literal, {65.0, 65.0, 40.0, 0.0},
                                          10.0, 0.01);
  std::size_t inc = 0;
  for (std::size_t k = 1; k < e.energy.size(); ++k) inc += e.energy[k] > e.energy[k - 1];
  return {inc == 0 && e.energy.back() < e.energy.front(),
          std::to_string(inc) + " increases over " + std::to_string(e.energy.size()) + " samples, H " +
              fmt(e.energy.front()) + " -> " + fmt(e.energy.back()) + " J"};
}

Outcome check_time_scales() {
  const ArmGeometry g = build_arm({});
  const StepResponse neural = neural_step_settling(CableParams{}, g.nodes(), g.ds, 60.0, suggest_dt(g, 0.04, 0.1), 5.0);
  const double mech = mechanical_settling(sensory_run());
  const double ratio = mech / neural.settling_time;
  std::string note = mech >= sensory_run().samples.back().t - 0.05 ? " (tip still moving at the end: lower bound)" : "";
  note += "; mechanical time from the reaching run";
  return {ratio >= 10.0, "neural " + fmt(neural.settling_time, "%.3f") + " s, mechanical " + fmt(mech, "%.2f") +
                             " s, ratio " + fmt(ratio, "%.1f") + " (>= 10)" + note};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"closed-form-vs-oracle", 10, check_closed_form_vs_oracle},
      {"cable-fixed-points", 5, check_cable_fixed_points},
      {"length-constant", 5, check_length_constant},
      {"static-rod", 30, check_static_rod},
      {"rest-trends", 10, check_rest_trends},
      {"lyapunov", 60, check_lyapunov},
      {"reaching", 300, check_reaching},
      {"tracking-vs-benchmark", 600, check_tracking_vs_benchmark},
      {"passive-energy", 30, check_passive_energy},
      {"time-scales", 120, check_time_scales},
  };
  int unexpected = 0;
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget;
    const bool pass = o.passed && in_time;
    const bool known = kKnownFailures.count(c.name) > 0;
    if (!pass) {
      ++failed;
      if (!known) ++unexpected;
    }
    std::printf("%s %-22s %s [%.1f s, budget %.0f s%s]%s\n", pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                secs, c.budget, in_time ? "" : ", OVER BUDGET", !pass && known ? " (known failure)" : "");
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed, %d unexpected\n", criteria.size(), failed, unexpected);
  return unexpected == 0 ? 0 : 1;
}
