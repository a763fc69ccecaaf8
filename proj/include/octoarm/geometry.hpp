#pragma once

// Tapered arm reference geometry and curvature-to-shape reconstruction.
//
// Discretization: n elements between n+1 uniformly spaced nodes. Fields
// (radius, area, voltages, couples) live on nodes. Element angles live on
// elements; the curvature at node i is the difference of the angles of the
// elements on either side of it divided by ds. Node 0 is clamped by a ghost
// element of angle 0, so the curvature vector has entries 0..n-1 defined by
// the kinematics; entry n (free tip) has no element beyond it.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "octoarm/core.hpp"

namespace octoarm {

struct GeometryConfig {
  double length = 0.2;           // [m]
  int elements = 100;
  double base_radius = 0.01;     // [m]
  double tip_radius = 0.001;     // [m]
  double youngs_modulus = 1.0e4; // [Pa]
  double density = 1042.0;       // [kg/m^3]
  double damping = 0.01;         // [kg/s]
  /// Peak muscle couple at the base [N m]. Empty selects calibrated_max_couple().
  std::optional<double> max_couple;
};

/// Base couple for which a fully active single muscle bends the mid-arm to
/// one full turn over the arm length, i.e. c(L/2) / EI(L/2) = 2 pi / L.
inline double calibrated_max_couple(const GeometryConfig& cfg) {
  const double mid_radius = 0.5 * (cfg.base_radius + cfg.tip_radius);
  const double target_curvature = 2.0 * kPi / cfg.length;
  // c(s)/EI(s) = 4 M / (E pi base^3 radius(s))
  return target_curvature * cfg.youngs_modulus * kPi * std::pow(cfg.base_radius, 3) * mid_radius / 4.0;
}

struct ArmGeometry {
  double length = 0.0;
  int elements = 0;
  double ds = 0.0;
  double youngs_modulus = 0.0;
  double density = 0.0;
  double damping = 0.0;
  double max_couple_base = 0.0;

  Field s;             // node arc length
  Field radius;        // node radius
  Field area;          // pi r^2
  Field second_moment; // pi r^4 / 4
  Field max_couple;    // c(s)

  std::size_t nodes() const { return s.size(); }
  double bending_stiffness(std::size_t i) const { return youngs_modulus * second_moment[i]; }
  double element_midpoint(std::size_t e) const { return (static_cast<double>(e) + 0.5) * ds; }
  double radius_at(double arc) const {
    return radius.front() + (radius.back() - radius.front()) * arc / length;
  }
};

namespace detail {
inline void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be a positive finite number");
}
}  // namespace detail

/// Builds the linearly tapered arm with a cubic max-couple law
/// c(s) = M (radius(s) / base_radius)^3.
inline ArmGeometry build_arm(const GeometryConfig& cfg) {
  detail::require_positive(cfg.length, "geometry.length");
  detail::require_positive(cfg.base_radius, "geometry.base_radius");
  detail::require_positive(cfg.tip_radius, "geometry.tip_radius");
  detail::require_positive(cfg.youngs_modulus, "geometry.youngs_modulus");
  detail::require_positive(cfg.density, "geometry.density");
  if (!(cfg.damping >= 0.0)) throw ConfigError("geometry.damping", "must be non-negative");
  if (cfg.elements < 16) throw ConfigError("geometry.elements", "must be at least 16");
  if (cfg.tip_radius > cfg.base_radius) {
    throw ConfigError("geometry.tip_radius", "must not exceed the base radius");
  }
  const double max_couple = cfg.max_couple.value_or(calibrated_max_couple(cfg));
  detail::require_positive(max_couple, "geometry.max_couple");

  ArmGeometry g;
  g.length = cfg.length;
  g.elements = cfg.elements;
  g.ds = cfg.length / cfg.elements;
  g.youngs_modulus = cfg.youngs_modulus;
  g.density = cfg.density;
  g.damping = cfg.damping;
  g.max_couple_base = max_couple;

  const auto n = static_cast<std::size_t>(cfg.elements) + 1;
  g.s.resize(n);
  g.radius.resize(n);
  g.area.resize(n);
  g.second_moment.resize(n);
  g.max_couple.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (i + 1 == n) ? cfg.length : static_cast<double>(i) * g.ds;
    const double r = cfg.base_radius + (cfg.tip_radius - cfg.base_radius) * s / cfg.length;
    g.s[i] = s;
    g.radius[i] = r;
    g.area[i] = kPi * r * r;
    g.second_moment[i] = kPi * r * r * r * r / 4.0;
    g.max_couple[i] = max_couple * std::pow(r / cfg.base_radius, 3);
  }
  return g;
}

/// Centerline of a clamped arm: element angles and node positions.
struct Centerline {
  Field element_angle;          // n entries
  std::vector<Vec2> position;   // n+1 entries, position[0] = 0
};

/// Node angles: 0 at the clamp, the mean of adjacent element angles inside,
/// and the last element angle at the tip.
inline Field node_angles(const Field& element_angle) {
  const std::size_t n = element_angle.size();
  Field out(n + 1);
  out[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) out[i] = 0.5 * (element_angle[i - 1] + element_angle[i]);
  out[n] = element_angle[n - 1];
  return out;
}

inline std::vector<Vec2> positions_from_angles(const Field& element_angle, double ds) {
  std::vector<Vec2> r(element_angle.size() + 1);
  for (std::size_t e = 0; e < element_angle.size(); ++e) r[e + 1] = r[e] + ds * tangent(element_angle[e]);
  return r;
}

/// Curvature at nodes 0..n from element angles; the free-tip entry repeats
/// its neighbour.
inline Field curvature_from_angles(const Field& element_angle, double ds) {
  const std::size_t n = element_angle.size();
  Field k(n + 1);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = (element_angle[i] - prev) / ds;
    prev = element_angle[i];
  }
  k[n] = k[n - 1];
  return k;
}

/// Integrates theta_s = kappa, r_s = a from the clamped base. `kappa` is a
/// nodal field (n+1 entries); the tip entry does not affect the shape.
inline Centerline reconstruct_shape(const Field& kappa, const ArmGeometry& geom) {
  const auto n = static_cast<std::size_t>(geom.elements);
  if (kappa.size() != n + 1 && kappa.size() != n) {
    throw DomainError("reconstruct_shape: curvature field has the wrong length");
  }
  Centerline c;
  c.element_angle.resize(n);
  double theta = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    theta += kappa[e] * geom.ds;
    c.element_angle[e] = theta;
  }
  c.position = positions_from_angles(c.element_angle, geom.ds);
  return c;
}

/// Mean curvature over the final 10% of the arm (trapezoidal).
inline double tip_curvature(const Field& kappa, const ArmGeometry& geom) {
  const double from = 0.9 * geom.length;
  const std::size_t n = geom.nodes();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = geom.s[i];
    const double b = geom.s[i + 1];
    if (b <= from) continue;
    double ka = kappa[i];
    double lo = a;
    if (a < from) {
      const double t = (from - a) / (b - a);
      ka = kappa[i] + t * (kappa[i + 1] - kappa[i]);
      lo = from;
    }
    acc += 0.5 * (ka + kappa[i + 1]) * (b - lo);
  }
  return acc / (geom.length - from);
}

/// Integral of |kappa| along the arm.
inline double total_curl(const Field& kappa, const ArmGeometry& geom) {
  Field a(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) a[i] = std::abs(kappa[i]);
  return trapezoid(a, geom.ds);
}

/// Mean |kappa| over the first quarter of the arm.
inline double base_curl(const Field& kappa, const ArmGeometry& geom) {
  const auto cells = static_cast<std::size_t>(std::floor(0.25 * geom.elements + 1e-9));
  Field a(kappa.begin(), kappa.begin() + static_cast<std::ptrdiff_t>(cells + 1));
  for (double& v : a) v = std::abs(v);
  return trapezoid(a, geom.ds) / (static_cast<double>(cells) * geom.ds);
}

}  // namespace octoarm
