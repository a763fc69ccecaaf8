#include <catch_amalgamated.hpp>

#include <cmath>

#include "octoarm/bvp_oracle.hpp"
#include "octoarm/equilibrium.hpp"
#include "octoarm/rod_dynamics.hpp"

using namespace octoarm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
// lambda^2 V'' - V - b g(V), by the exponential pieces' exact second derivative
double ode_residual(const EquilibriumVoltage& eq, const CableParams& p, double s) {
  const double v = eq(s);
  return p.lambda * p.lambda * eq.second_derivative(s) - v - p.b * relu(v);
}
}  // namespace

TEST_CASE("equilibrium examples", "[equilibrium]") {
  CableParams p;
  const double L = 0.2;
  SECTION("zero boundaries give the zero profile") {
    for (double b : {0.0, 1.0, 2.5}) {
      p.b = b;
      const auto eq = solve_voltage_equilibrium(0.0, 0.0, p, L);
      for (int k = 0; k <= 20; ++k) CHECK(eq(L * k / 20.0) == 0.0);
    }
  }
  SECTION("sinh profile without adaptation") {
    p.b = 0.0;
    const auto eq = solve_voltage_equilibrium(40.0, 0.0, p, L);
    CHECK_THAT(eq(0.1), WithinAbs(40.0 * std::sinh(1.0) / std::sinh(2.0), 1e-12));
    CHECK_THAT(eq(0.1), WithinAbs(12.962, 0.001));
  }
  SECTION("antisymmetric sign change crosses at mid-arm") {
    p.b = 0.0;
    const auto eq = solve_voltage_equilibrium(10.0, -10.0, p, L);
    CHECK(eq.kind == EquilibriumVoltage::Case::sign_change);
    CHECK_THAT(eq.crossing, WithinAbs(L / 2.0, 1e-11));
    for (int k = 0; k <= 20; ++k) CHECK_THAT(eq(L * k / 20.0), WithinAbs(-eq(L - L * k / 20.0), 1e-9));
  }
  SECTION("length constants of the same-sign branches") {
    p.b = 3.0;
    CHECK_THAT(solve_voltage_equilibrium(40.0, 10.0, p, L).pieces[0].length_constant, WithinRel(0.05, 1e-15));
    CHECK_THAT(solve_voltage_equilibrium(-40.0, -10.0, p, L).pieces[0].length_constant, WithinRel(0.1, 1e-15));
  }
}

TEST_CASE("equilibrium invariants", "[equilibrium][property]") {
  const double L = 0.2;
  for (double b : {0.0, 0.5, 1.0, 3.0}) {
    CableParams p;
    p.b = b;
    for (auto [v0, vl] : {std::pair{40.0, 0.0}, {65.0, 65.0}, {30.0, 120.0}, {10.0, -10.0}, {40.0, -20.0},
                          {-15.0, 50.0}, {-5.0, -30.0}}) {
      const auto eq = solve_voltage_equilibrium(v0, vl, p, L);
      CHECK(eq(0.0) == v0);
      CHECK(eq(L) == vl);
      const double scale = std::max(std::abs(v0), std::abs(vl));
      for (int k = 1; k < 200; ++k) {
        const double s = L * k / 200.0;
        if (eq.kind == EquilibriumVoltage::Case::sign_change && std::abs(s - eq.crossing) < 1e-9) continue;
        CHECK(std::abs(ode_residual(eq, p, s)) <= 1e-6 * scale);
      }
      if (eq.kind == EquilibriumVoltage::Case::sign_change) {
        const double s1 = eq.crossing;
        CHECK(std::abs(eq.pieces[0].value(s1)) < 1e-8);
        CHECK(std::abs(eq.pieces[1].value(s1)) < 1e-8);
        CHECK_THAT(eq.pieces[0].slope(s1), WithinAbs(eq.pieces[1].slope(s1), 1e-8 * scale / p.lambda));
      }
    }
  }
}

TEST_CASE("unbracketed crossing reports residuals", "[equilibrium]") {
  CableParams p;
  const double L = 0.2;
  const auto eq = solve_voltage_equilibrium(40.0, -20.0, p, L);
  REQUIRE(std::abs(eq.crossing - L / 2.0) > 0.002);
  EquilibriumOptions opts;
  opts.bracket_margin = 0.499 * L;
  try {
    solve_voltage_equilibrium(40.0, -20.0, p, L, opts);
    FAIL("expected an analysis error");
  } catch (const AnalysisError& e) {
    CHECK(e.residual_lo() * e.residual_hi() > 0.0);
  }
  CHECK_THROWS_AS(solve_voltage_equilibrium(std::nan(""), 0.0, p, L), DomainError);
}

TEST_CASE("finite-difference oracle reproduces the sinh profile", "[equilibrium][oracle]") {
  const BvpSolution sol = solve_rest_voltage_bvp(40.0, 0.0, 0.1, 0.0, 0.2);
  double err = 0.0;
  for (std::size_t i = 0; i < sol.s.size(); ++i) {
    err = std::max(err, std::abs(sol.V[i] - 40.0 * std::sinh((0.2 - sol.s[i]) / 0.1) / std::sinh(2.0)));
  }
  CHECK(err < 1e-9);
  // b = 3 on a positive profile has length constant lambda / 2
  const BvpSolution act = solve_rest_voltage_bvp(40.0, 0.0, 0.1, 3.0, 0.2);
  for (std::size_t i = 0; i < act.s.size(); i += 100) {
    CHECK_THAT(act.V[i], WithinAbs(40.0 * std::sinh((0.2 - act.s[i]) / 0.05) / std::sinh(4.0), 1e-9));
  }
}

TEST_CASE("closed form agrees with the oracle on the atlas and sign-change cases", "[equilibrium][oracle]") {
  CableParams p;
  std::vector<std::tuple<double, double, double>> cases;
  for (double v0 : {30.0, 40.0, 50.0, 60.0}) {
    for (double vl : {60.0, 80.0, 100.0, 120.0}) cases.emplace_back(v0, vl, 1.0);
  }
  for (double b : {0.0, 0.5, 1.0, 1.5, 2.0}) cases.emplace_back(40.0, 80.0, b);
  for (double b : {0.0, 1.0}) {
    cases.emplace_back(10.0, -10.0, b);
    cases.emplace_back(40.0, -20.0, b);
  }
  for (auto [v0, vl, b] : cases) {
    p.b = b;
    const auto eq = solve_voltage_equilibrium(v0, vl, p, 0.2);
    const auto ref = solve_rest_voltage_bvp(v0, vl, p.lambda, b, 0.2);
    for (std::size_t i = 0; i < ref.s.size(); ++i) REQUIRE_THAT(eq(ref.s[i]), WithinAbs(ref.V[i], 1e-6));
  }
}

TEST_CASE("closed form agrees with relaxed cables", "[equilibrium][oracle]") {
  const ArmGeometry g = build_arm({});
  CableParams p;
  const double dt = suggest_dt(g, p.tau, p.lambda);
  for (auto [v0, vl] : {std::pair{30.0, 60.0}, {60.0, 120.0}, {40.0, 0.0}, {40.0, -20.0}}) {
    const auto eq = solve_voltage_equilibrium(v0, vl, p, g.length);
    const auto r = relax_to_steady(CableState::zeros(g.nodes(), Muscle::top), Field(g.nodes(), 0.0), p,
                                   BoundaryCondition::fixed(v0, vl), dt, g.ds, 1e-8);
    const Field exact = eq.sample(g.s);
    double err = 0.0;
    for (std::size_t i = 0; i < g.nodes(); ++i) err = std::max(err, std::abs(r.state.V[i] - exact[i]));
    // the sign-change kink limits the discrete operator's accuracy
    CHECK(err < (vl < 0.0 ? 1e-3 : 1e-5));
  }
}

TEST_CASE("rest curvature", "[equilibrium]") {
  const ArmGeometry g = build_arm({});
  const std::size_t n = g.nodes();
  CHECK(max_abs(rest_curvature(Field(n, 40.3), Field(n, 40.3), g)) == 0.0);
  const Field sat = rest_curvature(Field(n, 120.0), Field(n, 0.0), g);
  for (std::size_t i = 0; i < n; ++i) CHECK_THAT(sat[i], WithinRel(g.max_couple[i] / g.bending_stiffness(i), 1e-14));
  Field a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = 39.0 + 0.03 * i;
    b[i] = 41.0 - 0.02 * i;
  }
  const Field k1 = rest_curvature(a, b, g);
  const Field k2 = rest_curvature(b, a, g);
  for (std::size_t i = 0; i < n; ++i) CHECK(k1[i] == -k2[i]);
}

TEST_CASE("rest shapes", "[equilibrium]") {
  const ArmGeometry g = build_arm({});
  CableParams p;
  const RestShape straight = rest_shape({40.0, 0.0, 40.0, 0.0}, p, g);
  CHECK(max_abs(straight.kappa) == 0.0);
  CHECK(straight.centerline.position.back().y == 0.0);
}

// Regression goldens computed by this solver (b = 1, bottom (40, 0) mV).
TEST_CASE("rest-shape atlas goldens", "[equilibrium][golden]") {
  struct Row {
    double v0, vl, kappa_tip, curl, base_mean;
  };
  const Row rows[] = {
      {30, 60, 123.32069641073537, 3.3629354998703707, 0.17278759594743859},
      {30, 80, 123.32069641073537, 4.6929370830809765, 0.17278759594743859},
      {30, 100, 123.32069641073537, 5.5162303712545908, 0.17278759594743859},
      {30, 120, 123.32069641073537, 6.0540322628231227, 0.17278759594743859},
      {40, 60, 123.32069641073537, 3.5110057632025269, 0.33571365841177081},
      {40, 80, 123.32069641073537, 4.8481665101680029, 0.33813272166155434},
      {40, 100, 123.32069641073537, 5.6467487656723101, 0.33977478351622808},
      {40, 120, 123.32069641073537, 6.2365358843250274, 0.34104426277996081},
      {50, 60, 123.32069641073537, 3.8932092000832923, 6.6952189901943227},
      {50, 80, 123.32069641073537, 5.3030069849888335, 7.451411161164355},
      {50, 100, 123.32069641073537, 6.1786827065835555, 7.8580337950003392},
      {50, 120, 123.32069641073537, 6.9189694993782433, 9.3850490565201152},
      {60, 60, 123.32069641073537, 4.282015844905338, 12.99257082366557},
      {60, 80, 123.32069641073537, 5.8275644189598497, 14.247528664207456},
      {60, 100, 123.32069641073537, 6.8597777231005495, 16.366746912998806},
      {60, 120, 123.32069641073537, 7.8032090325769241, 18.327389136299271},
  };
  const ArmGeometry g = build_arm({});
  CableParams p;
  for (const Row& r : rows) {
    const RestShape s = rest_shape({r.v0, r.vl, 40.0, 0.0}, p, g);
    CHECK_THAT(s.kappa_tip, WithinRel(r.kappa_tip, 1e-9));
    CHECK_THAT(s.curl, WithinRel(r.curl, 1e-9));
    CHECK_THAT(s.base_mean, WithinRel(r.base_mean, 1e-9));
  }
  // adaptation sweep at top (40, 80)
  const double curls[] = {6.3691073256112292, 5.3820791650216835, 4.8481665101680029, 4.4705447113292669,
                          4.1348165122179799};
  const double bs[] = {0.0, 0.5, 1.0, 1.5, 2.0};
  for (int k = 0; k < 5; ++k) {
    p.b = bs[k];
    CHECK_THAT(rest_shape({40.0, 80.0, 40.0, 0.0}, p, g).curl, WithinRel(curls[k], 1e-9));
  }
}
