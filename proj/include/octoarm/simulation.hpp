#pragma once

// Coupled arm: sensing -> control -> couples -> rod step -> cable step.
//
// The cables advance with the neural step dt. The rod advances once every
// `mechanical_substeps` neural steps (its own step stays inside the elastic
// bound); sensing and the control law are evaluated at those instants. The
// couple applied over a rod step comes from the voltages at its start.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "octoarm/control.hpp"
#include "octoarm/coupling.hpp"
#include "octoarm/diagnostics.hpp"
#include "octoarm/equilibrium.hpp"
#include "octoarm/geometry.hpp"
#include "octoarm/neural_cable.hpp"
#include "octoarm/rod_dynamics.hpp"
#include "octoarm/sensing.hpp"

namespace octoarm {

struct SimulationSetup {
  CableParams cable;
  DragModel drag;
  RotationalDamping rotational_damping = RotationalDamping::literal;
  ControlConfig control;
  Vec2 target{0.2, 0.1};
  double dt = 0.0;  // neural step; 0 selects suggest_dt
  /// Neural steps per rod step; 0 selects floor(elastic bound / dt).
  int mechanical_substeps = 0;
  ReachTolerances reach;
};

class ArmSimulation {
 public:
  ArmSimulation(const ArmGeometry& geom, SimulationSetup setup)
      : geom_(geom),
        setup_(std::move(setup)),
        rod_(geom_, setup_.drag, setup_.rotational_damping),
        top_stepper_(setup_.cable, geom_.ds),
        bottom_stepper_(setup_.cable, geom_.ds) {
    setup_.control.validate();
    const TimeStepBounds bounds = suggest_dt_bounds(geom_, setup_.cable.tau, setup_.cable.lambda);
    if (setup_.dt <= 0.0) setup_.dt = bounds.dt();
    if (setup_.mechanical_substeps <= 0) {
      setup_.mechanical_substeps = std::max(1, static_cast<int>(std::floor(bounds.elastic / setup_.dt)));
    }
    if (setup_.control.mu_star <= 0.0) setup_.control.mu_star = geom_.max_couple_base;
    const std::size_t nodes = geom_.nodes();
    rod_state_ = RodState::straight(nodes - 1, geom_.ds);
    top_ = CableState::zeros(nodes, Muscle::top);
    bottom_ = CableState::zeros(nodes, Muscle::bottom);
    currents_ = {Field(nodes, 0.0), Field(nodes, 0.0)};
    u_net_.assign(nodes, 0.0);
    reading_ = sense(rod_state_.r, rod_state_.theta, geom_.s, setup_.target);
  }

  /// Starts from the rest shape under fixed-fixed boundary voltages, then
  /// switches both cables to free-free.
  void initialize_rest(const RestVoltages& v) {
    const RestShape rest = rest_shape(v, setup_.cable, geom_);
    rod_state_ = RodState::at_rest(rest.centerline.element_angle, geom_.ds);
    top_.V = rest.v_top;
    bottom_.V = rest.v_bottom;
    top_.W.resize(top_.V.size());
    bottom_.W.resize(bottom_.V.size());
    for (std::size_t i = 0; i < top_.V.size(); ++i) {
      top_.W[i] = setup_.cable.b * relu(top_.V[i]);
      bottom_.W[i] = setup_.cable.b * relu(bottom_.V[i]);
    }
    bc_top_ = bc_bottom_ = BoundaryCondition::free();
    t_ = 0.0;
    steps_ = 0;
    reading_ = sense(rod_state_.r, rod_state_.theta, geom_.s, setup_.target);
    u_net_ = muscle_couples(top_.V, bottom_.V, geom_).net;
  }

  void set_rod_state(RodState s) {
    rod_state_ = std::move(s);
    reading_ = sense(rod_state_.r, rod_state_.theta, geom_.s, setup_.target);
  }
  void set_cables(CableState top, CableState bottom, BoundaryCondition bc) {
    set_cables(std::move(top), std::move(bottom), bc, bc);
  }
  void set_cables(CableState top, CableState bottom, BoundaryCondition bc_top, BoundaryCondition bc_bottom) {
    top_ = std::move(top);
    bottom_ = std::move(bottom);
    bc_top_ = bc_top;
    bc_bottom_ = bc_bottom;
  }

  /// Advances by one neural step.
  void step() {
    const auto k = static_cast<std::size_t>(setup_.mechanical_substeps);
    if (steps_ % k == 0) mechanical_step(static_cast<double>(k) * setup_.dt);
    if (setup_.control.law == ControlLaw::reference_tracking) {
      capped_ += tracking_current(top_.V, ref_top_, setup_.cable, setup_.control.beta, setup_.control.current_cap,
                                  currents_.top);
      capped_ += tracking_current(bottom_.V, ref_bottom_, setup_.cable, setup_.control.beta,
                                  setup_.control.current_cap, currents_.bottom);
    }
    top_stepper_.step(top_, currents_.top, bc_top_, setup_.dt, steps_);
    bottom_stepper_.step(bottom_, currents_.bottom, bc_bottom_, setup_.dt, steps_);
    ++steps_;
    t_ = static_cast<double>(steps_) * setup_.dt;
  }

  /// Advances by `count` neural steps.
  void advance(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) step();
  }

  DiagnosticsSample sample() const {
    const SensoryReading reading = sense(rod_state_.r, rod_state_.theta, geom_.s, setup_.target);
    DiagnosticsSample d;
    d.t = t_;
    d.energy = mechanical_energy(rod_state_, u_net_, rod_);
    d.kappa_tip = tip_curvature(rod_state_, geom_);
    d.s_bar_over_L = reading.s_bar / geom_.length;
    d.max_speed = rod_state_.max_speed();
    d.reach = reach_status(reading, rod_state_, geom_, setup_.reach);
    // relative to the reference in force; it is a Lyapunov function only
    // while that reference stays constant
    if (setup_.control.law == ControlLaw::reference_tracking && !ref_top_.voltage.empty()) {
      d.lyap_neural = lyapunov_neural(top_.V, top_.W, ref_top_.voltage, setup_.cable, geom_.ds) +
                      lyapunov_neural(bottom_.V, bottom_.W, ref_bottom_.voltage, setup_.cable, geom_.ds);
    }
    return d;
  }

  double time() const { return t_; }
  std::size_t steps() const { return steps_; }
  double dt() const { return setup_.dt; }
  int mechanical_substeps() const { return setup_.mechanical_substeps; }
  const SimulationSetup& setup() const { return setup_; }
  const ArmGeometry& geometry() const { return geom_; }
  const RodIntegrator& rod() const { return rod_; }
  const RodState& rod_state() const { return rod_state_; }
  const CableState& top() const { return top_; }
  const CableState& bottom() const { return bottom_; }
  const MuscleCurrents& currents() const { return currents_; }
  const Field& net_couple() const { return u_net_; }
  const SensoryReading& reading() const { return reading_; }
  /// Node evaluations clipped by the tracking current cap so far.
  std::size_t capped_currents() const { return capped_; }

 private:
  void update_neural_couple() { u_net_ = muscle_couples(top_.V, bottom_.V, geom_).net; }

  void mechanical_step(double dt_mech) {
    reading_ = sense(rod_state_.r, rod_state_.theta, geom_.s, setup_.target);
    const ControlConfig& c = setup_.control;
    switch (c.law) {
      case ControlLaw::passive:
        // no input current; the cables still drive the muscles
        std::fill(currents_.top.begin(), currents_.top.end(), 0.0);
        std::fill(currents_.bottom.begin(), currents_.bottom.end(), 0.0);
        update_neural_couple();
        break;
      case ControlLaw::benchmark:
        std::fill(currents_.top.begin(), currents_.top.end(), 0.0);
        std::fill(currents_.bottom.begin(), currents_.bottom.end(), 0.0);
        u_net_ = benchmark_couple(reading_, c.mu_star, geom_);
        break;
      case ControlLaw::sensory_feedback:
        currents_ = sensory_feedback_current(reading_, c.mu);
        update_neural_couple();
        break;
      case ControlLaw::reference_tracking: {
        const Field u_star = benchmark_couple(reading_, c.mu_star, geom_);
        const ActivationReference ref = couple_to_activation_reference(u_star, geom_, c.epsilon);
        ref_top_ = make_tracking_reference(ref.top, setup_.cable, c.epsilon, geom_.ds, ReferenceDiffusion::matched, bc_top_);
        ref_bottom_ =
            make_tracking_reference(ref.bottom, setup_.cable, c.epsilon, geom_.ds, ReferenceDiffusion::matched,
                                    bc_bottom_);
        update_neural_couple();
        break;
      }
    }
    rod_.step(rod_state_, u_net_, dt_mech, steps_);
  }

  ArmGeometry geom_;
  SimulationSetup setup_;
  RodIntegrator rod_;
  CableStepper top_stepper_;
  CableStepper bottom_stepper_;
  RodState rod_state_;
  CableState top_;
  CableState bottom_;
  BoundaryCondition bc_top_ = BoundaryCondition::free();
  BoundaryCondition bc_bottom_ = BoundaryCondition::free();
  MuscleCurrents currents_;
  Field u_net_;
  SensoryReading reading_;
  TrackingReference ref_top_;
  TrackingReference ref_bottom_;
  double t_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t capped_ = 0;
};

}  // namespace octoarm
