#include <catch_amalgamated.hpp>

#include <cmath>

#include "octoarm/control.hpp"
#include "octoarm/neural_cable.hpp"

using namespace octoarm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
SensoryReading reading_with(const Field& alpha, std::size_t closest) {
  SensoryReading r;
  r.alpha = alpha;
  r.closest = closest;
  return r;
}
}  // namespace

TEST_CASE("sensory feedback currents", "[control]") {
  const Field alpha{kPi / 2.0, -kPi / 6.0, 0.0, kPi / 2.0};
  const MuscleCurrents c = sensory_feedback_current(reading_with(alpha, 2), 500.0);
  // target to the left (alpha > 0) drives the top muscle
  CHECK_THAT(c.top[0], WithinAbs(500.0, 1e-9));
  CHECK(c.bottom[0] == 0.0);
  CHECK_THAT(c.bottom[1], WithinAbs(250.0, 1e-9));
  CHECK(c.top[1] == 0.0);
  CHECK(c.top[2] == 0.0);
  CHECK(c.bottom[2] == 0.0);
  // beyond the closest node
  CHECK(c.top[3] == 0.0);
  CHECK(c.bottom[3] == 0.0);
}

TEST_CASE("sensory feedback is complementary and non-negative", "[control][property]") {
  Field alpha(101);
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = -3.1 + 0.062 * static_cast<double>(i);
  const MuscleCurrents c = sensory_feedback_current(reading_with(alpha, 80), 500.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    CHECK(c.top[i] >= 0.0);
    CHECK(c.bottom[i] >= 0.0);
    CHECK(c.top[i] * c.bottom[i] == 0.0);
    if (i <= 80) CHECK_THAT(c.top[i] - c.bottom[i], WithinAbs(500.0 * std::sin(alpha[i]), 1e-9));
  }
}

TEST_CASE("benchmark couple saturates at the local max couple", "[control]") {
  const ArmGeometry g = build_arm({});
  Field alpha(g.nodes(), kPi / 2.0);
  alpha[3] = 1e-4;
  const Field u = benchmark_couple(reading_with(alpha, 50), g.max_couple_base, g);
  CHECK_THAT(u[0], WithinRel(-g.max_couple[0], 1e-14));
  CHECK_THAT(u[3], WithinRel(-g.max_couple_base * std::sin(1e-4), 1e-12));
  CHECK_THAT(u[50], WithinRel(-g.max_couple[50], 1e-14));
  CHECK(u[51] == 0.0);
}

TEST_CASE("couple to activation reference", "[control]") {
  const ArmGeometry g = build_arm({});
  Field u(g.nodes(), 0.0);
  u[0] = 0.5 * g.max_couple[0];
  u[1] = -0.25 * g.max_couple[1];
  u[2] = 2.0 * g.max_couple[2];
  const ActivationReference r = couple_to_activation_reference(u, g, 1e-3);
  CHECK_THAT(r.bottom[0], WithinAbs(0.5, 1e-14));
  CHECK(r.top[0] == 1e-3);
  CHECK_THAT(r.top[1], WithinAbs(0.25, 1e-14));
  CHECK(r.bottom[1] == 1e-3);
  CHECK(r.bottom[2] == 1.0 - 1e-3);
  CHECK(r.top[5] == 1e-3);
  CHECK(r.bottom[5] == 1e-3);
}

TEST_CASE("tracking reference voltage", "[control]") {
  const CableParams p;
  const TrackingReference ref = make_tracking_reference(Field(8, 0.5), p, 1e-3, 0.002);
  for (double v : ref.voltage) CHECK_THAT(v, WithinAbs(40.0, 1e-9));
  for (double d : ref.diffusion) CHECK_THAT(d, WithinAbs(0.0, 1e-6));
}

TEST_CASE("reference is a fixed point of the tracked cable", "[control][property]") {
  const CableParams p;
  const std::size_t n = 101;
  const double ds = 0.002;
  Field v_bar(n);
  for (std::size_t i = 0; i < n; ++i) v_bar[i] = 0.2 + 0.6 * std::pow(std::sin(0.03 * i), 2);
  for (const BoundaryCondition& bc : {BoundaryCondition::free(), BoundaryCondition::fixed(0.0, 0.0)}) {
    TrackingReference ref = make_tracking_reference(v_bar, p, 1e-3, ds, ReferenceDiffusion::matched, bc);
    if (bc.is_fixed()) {
      ref = make_tracking_reference(v_bar, p, 1e-3, ds, ReferenceDiffusion::matched,
                                    BoundaryCondition::fixed(ref.voltage.front(), ref.voltage.back()));
    }
    const BoundaryCondition used =
        bc.is_fixed() ? BoundaryCondition::fixed(ref.voltage.front(), ref.voltage.back()) : bc;
    CableState st{ref.voltage, Field(n), Muscle::top};
    for (std::size_t i = 0; i < n; ++i) st.W[i] = p.b * relu(ref.voltage[i]);
    CableStepper stepper(p, ds);
    Field current;
    for (int k = 0; k < 200; ++k) {
      tracking_current(st.V, ref, p, 10.0, 1e4, current);
      stepper.step(st, current, used, 4e-6, k);
    }
    for (std::size_t i = 0; i < n; ++i) CHECK_THAT(st.V[i], WithinAbs(ref.voltage[i], 1e-9));
  }
}

TEST_CASE("tracking current cap", "[control]") {
  const CableParams p;
  TrackingReference ref{Field(4, 40.0), Field(4, 0.0)};
  Field out;
  const std::size_t capped = tracking_current(Field{-1e6, 40.0, 1e6, 40.0}, ref, p, 10.0, 1e4, out);
  CHECK(capped == 2);
  CHECK(out[0] == 1e4);
  CHECK(out[2] == -1e4);
  CHECK_THAT(out[1], WithinAbs(p.b * 40.0 + 40.0, 1e-9));
}

TEST_CASE("control config validation", "[control]") {
  ControlConfig c;
  c.epsilon = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.beta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_control_law("reference-tracking") == ControlLaw::reference_tracking);
  CHECK_THROWS_AS(parse_control_law("bogus"), ConfigError);
}
