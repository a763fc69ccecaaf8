#pragma once

// Planar inextensible, unshearable rod with a clamped base and a free tip.
//
// State: element angles theta_e and rates. Node positions and velocities are
// derived from them (r_s = a), so segment lengths are exact at every step.
// Each step solves the translational momentum balance of the nodes together
// with the angular balance of the elements. The internal force in every
// element is the Lagrange multiplier of the constraint
// r_{e+1} - r_e = ds a(theta_e); the multipliers satisfy a symmetric
// block-tridiagonal system solved in O(n).
//
// Elastic/muscle torque on element e is m_{e+1} - m_e with m = EI kappa + u
// and m_n = 0 (free tip). Rotational and translational damping are implicit,
// drag is explicit, and the update is symplectic Euler.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "octoarm/core.hpp"
#include "octoarm/geometry.hpp"

namespace octoarm {

struct RodState {
  Field theta;                 // element angles (n)
  Field theta_t;               // element angular rates (n)
  std::vector<Vec2> r;         // node positions (n+1)
  std::vector<Vec2> r_t;       // node velocities (n+1)

  std::size_t elements() const { return theta.size(); }
  Field curvature(double ds) const { return curvature_from_angles(theta, ds); }

  /// Rebuilds positions and velocities from angles and rates.
  void sync(double ds) {
    const std::size_t n = theta.size();
    r.assign(n + 1, Vec2{});
    r_t.assign(n + 1, Vec2{});
    for (std::size_t e = 0; e < n; ++e) {
      const double c = std::cos(theta[e]);
      const double sn = std::sin(theta[e]);
      r[e + 1] = r[e] + Vec2{ds * c, ds * sn};
      r_t[e + 1] = r_t[e] + Vec2{-ds * theta_t[e] * sn, ds * theta_t[e] * c};
    }
  }

  double max_speed() const {
    double m = 0.0;
    for (const auto& v : r_t) m = std::max(m, norm(v));
    return m;
  }

  static RodState straight(std::size_t elements, double ds) { return at_rest(Field(elements, 0.0), ds); }
  static RodState at_rest(Field element_angle, double ds) {
    RodState s;
    s.theta_t.assign(element_angle.size(), 0.0);
    s.theta = std::move(element_angle);
    s.sync(ds);
    return s;
  }
};

struct DragModel {
  enum class Mode { linear, quadratic };
  double c_tangential = 0.01;
  double c_normal = 0.1;
  Mode mode = Mode::linear;

  static DragModel none() { return {0.0, 0.0, Mode::linear}; }
  void validate() const {
    if (!(c_tangential >= 0.0)) throw ConfigError("drag.c_tangential", "must be non-negative");
    if (!(c_normal >= 0.0)) throw ConfigError("drag.c_normal", "must be non-negative");
  }
};

/// Unit tangent at each node: e1 at the clamp, the bisector of neighbouring
/// elements inside, the last element at the tip.
inline std::vector<Vec2> node_tangents(const Field& element_angle) {
  const Field phi = node_angles(element_angle);
  std::vector<Vec2> a(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) a[i] = tangent(phi[i]);
  return a;
}

/// Resistive drag per unit length at each node.
inline std::vector<Vec2> drag_force(const RodState& state, const DragModel& drag) {
  const std::size_t n = state.r_t.size();
  std::vector<Vec2> f(n);
  if (drag.c_tangential == 0.0 && drag.c_normal == 0.0) return f;
  const Field phi = node_angles(state.theta);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = tangent(phi[i]);
    const Vec2 b = normal(phi[i]);
    const double va = dot(state.r_t[i], a);
    const double vb = dot(state.r_t[i], b);
    double fa = drag.c_tangential * va;
    double fb = drag.c_normal * vb;
    if (drag.mode == DragModel::Mode::quadratic) {
      fa *= std::abs(va);
      fb *= std::abs(vb);
    }
    f[i] = -1.0 * (fa * a + fb * b);
  }
  return f;
}

/// How zeta enters the angular balance. `literal` applies -zeta theta_t;
/// `proportional` applies -zeta (I/A) theta_t, so translation and rotation
/// are damped at the same local rate zeta / (rho A).
enum class RotationalDamping { proportional, literal };

struct TimeStepBounds {
  double elastic = 0.0;
  double neural = 0.0;
  double dt() const { return std::min(elastic, neural); }
};

/// Shared explicit step: min of 0.25 ds sqrt(rho/E) and
/// 0.5 ds^2 tau / (2 lambda^2). lambda <= 0 disables the neural bound.
inline TimeStepBounds suggest_dt_bounds(const ArmGeometry& geom, double tau, double lambda) {
  TimeStepBounds b;
  b.elastic = 0.25 * geom.ds * std::sqrt(geom.density / geom.youngs_modulus);
  b.neural = lambda > 0.0 ? 0.5 * geom.ds * geom.ds * tau / (2.0 * lambda * lambda)
                          : std::numeric_limits<double>::infinity();
  return b;
}

inline double suggest_dt(const ArmGeometry& geom, double tau, double lambda) {
  return suggest_dt_bounds(geom, tau, lambda).dt();
}

class RodIntegrator {
 public:
  explicit RodIntegrator(const ArmGeometry& geom, DragModel drag = {},
                         RotationalDamping damping = RotationalDamping::literal)
      : geom_(geom), drag_(drag), damping_mode_(damping) {
    drag_.validate();
    const auto n = static_cast<std::size_t>(geom.elements);
    const double ds = geom.ds;
    node_mass_.assign(n + 1, 0.0);
    node_weight_.assign(n + 1, ds);
    node_weight_[0] = node_weight_[n] = 0.5 * ds;
    for (std::size_t i = 0; i <= n; ++i) node_mass_[i] = geom.density * geom.area[i] * node_weight_[i];
    inertia_.assign(n, 0.0);
    rot_damping_.assign(n, 0.0);
    for (std::size_t e = 0; e < n; ++e) {
      const double rad = geom.radius_at(geom.element_midpoint(e));
      inertia_[e] = geom.density * kPi * std::pow(rad, 4) / 4.0 * ds;
      const double scale = damping == RotationalDamping::proportional ? rad * rad / 4.0 : 1.0;
      rot_damping_[e] = geom.damping * scale * ds;
    }
    bending_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) bending_[i] = geom.bending_stiffness(i);
  }

  const ArmGeometry& geometry() const { return geom_; }
  const DragModel& drag() const { return drag_; }
  const Field& node_mass() const { return node_mass_; }
  const Field& node_weight() const { return node_weight_; }
  const Field& element_inertia() const { return inertia_; }
  /// Rotational damping per element [N m s].
  const Field& element_damping() const { return rot_damping_; }
  RotationalDamping damping_mode() const { return damping_mode_; }

  /// Advances the rod by dt under the net muscle couple u (nodal field).
  void step(RodState& s, const Field& u, double dt, std::size_t step_index = 0) {
    const std::size_t n = s.theta.size();
    const double ds = geom_.ds;
    const double zeta = geom_.damping;

    // Internal couple m_i = EI kappa_i + u_i, i = 0..n-1; m_n = 0.
    moment_.resize(n + 1);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      moment_[i] = bending_[i] * (s.theta[i] - prev) / ds + u[i];
      prev = s.theta[i];
    }
    moment_[n] = 0.0;

    const std::vector<Vec2> drag = drag_force(s, drag_);

    // Per-node effective mass with implicit translational damping, and the
    // explicit part of the node momentum update.
    inv_mass_.resize(n + 1);
    dv0_.resize(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
      const double damp = zeta * node_weight_[i];
      const double m_eff = node_mass_[i] + dt * damp;
      inv_mass_[i] = 1.0 / m_eff;
      const Vec2 force = node_weight_[i] * drag[i];
      // velocity change without constraint impulses
      dv0_[i] = (dt * inv_mass_[i]) * (force - damp * s.r_t[i]);
    }
    dv0_[0] = Vec2{};
    inv_mass_[0] = 0.0;

    // Rotational update without constraint impulses.
    inv_j_.resize(n);
    omega0_.resize(n);
    for (std::size_t e = 0; e < n; ++e) {
      const double j_eff = inertia_[e] + dt * rot_damping_[e];
      inv_j_[e] = 1.0 / j_eff;
      omega0_[e] = (inertia_[e] * s.theta_t[e] + dt * (moment_[e + 1] - moment_[e])) * inv_j_[e];
    }

    // Block-tridiagonal system for the constraint impulses lambda_e:
    //   -(1/m_e) l_{e-1} + D_e l_e - (1/m_{e+1}) l_{e+1} = rhs_e
    diag_.resize(n);
    rhs_.resize(n);
    frame_.resize(n);
    for (std::size_t e = 0; e < n; ++e) frame_[e] = tangent(s.theta[e]);
    for (std::size_t e = 0; e < n; ++e) {
      const Vec2 a = frame_[e];
      const Vec2 b{-a.y, a.x};
      const double im_hi = inv_mass_[e + 1];
      const double im_lo = inv_mass_[e];
      const double k = ds * ds * inv_j_[e];
      diag_[e] = {im_hi + im_lo + k * b.x * b.x, k * b.x * b.y, im_hi + im_lo + k * b.y * b.y};
      const Vec2 target = (ds * (omega0_[e] - s.theta_t[e])) * b - (dt * ds * s.theta_t[e] * s.theta_t[e]) * a;
      rhs_[e] = target - (dv0_[e + 1] - dv0_[e]);
    }
    solve_block_tridiagonal();

    // Rates, angles, derived kinematics.
    for (std::size_t e = 0; e < n; ++e) {
      const Vec2 b{-frame_[e].y, frame_[e].x};
      s.theta_t[e] = omega0_[e] - ds * inv_j_[e] * dot(b, lambda_[e]);
      s.theta[e] += dt * s.theta_t[e];
    }
    s.sync(ds);

    for (std::size_t e = 0; e < n; ++e) {
      if (!std::isfinite(s.theta[e]) || !std::isfinite(s.theta_t[e])) {
        throw IntegrationError(step_index, "rod state became non-finite at element " + std::to_string(e));
      }
    }
  }

  /// Internal couple m = EI kappa + u at nodes (m_n = 0) for a state.
  Field internal_couple(const RodState& s, const Field& u) const {
    const std::size_t n = s.theta.size();
    Field m(n + 1, 0.0);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = bending_[i] * (s.theta[i] - prev) / geom_.ds + u[i];
      prev = s.theta[i];
    }
    return m;
  }

 private:
  struct Sym2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
    Vec2 solve(const Vec2& v) const {
      const double det = xx * yy - xy * xy;
      return {(yy * v.x - xy * v.y) / det, (xx * v.y - xy * v.x) / det};
    }
  };

  // Equation e couples lambda_e to lambda_{e-1} and lambda_{e+1} through
  // -(1/m_e) I and -(1/m_{e+1}) I respectively.
  void solve_block_tridiagonal() {
    const std::size_t n = diag_.size();
    lambda_.resize(n);
    for (std::size_t e = 1; e < n; ++e) {
      const double c = inv_mass_[e];  // off-diagonal magnitude between e-1 and e
      // D_e <- D_e - c^2 D_{e-1}^{-1};  rhs_e <- rhs_e + c D_{e-1}^{-1} rhs_{e-1}
      const Sym2& p = diag_[e - 1];
      const double det = p.xx * p.yy - p.xy * p.xy;
      const Sym2 inv{p.yy / det, -p.xy / det, p.xx / det};
      diag_[e].xx -= c * c * inv.xx;
      diag_[e].xy -= c * c * inv.xy;
      diag_[e].yy -= c * c * inv.yy;
      rhs_[e] += c * p.solve(rhs_[e - 1]);
    }
    lambda_[n - 1] = diag_[n - 1].solve(rhs_[n - 1]);
    for (std::size_t e = n - 1; e-- > 0;) {
      lambda_[e] = diag_[e].solve(rhs_[e] + inv_mass_[e + 1] * lambda_[e + 1]);
    }
  }

  ArmGeometry geom_;
  DragModel drag_;
  RotationalDamping damping_mode_;
  Field node_mass_;
  Field rot_damping_;
  Field node_weight_;
  Field inertia_;
  Field bending_;

  Field moment_;
  Field inv_mass_;
  Field inv_j_;
  Field omega0_;
  std::vector<Vec2> dv0_;
  std::vector<Sym2> diag_;
  std::vector<Vec2> rhs_;
  std::vector<Vec2> lambda_;
  std::vector<Vec2> frame_;
};

/// One explicit step of the rod under couple u.
inline RodState step_rod(RodState state, const Field& u, const ArmGeometry& geom, double dt,
                         const DragModel& drag = DragModel::none()) {
  RodIntegrator integrator(geom, drag);
  integrator.step(state, u, dt);
  return state;
}

}  // namespace octoarm
