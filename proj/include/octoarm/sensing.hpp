#pragma once

// Bearing to the target along the arm and the closest point s_bar.
//
// alpha(s) is the signed angle from the local tangent a(s) to r_target - r(s),
// positive when the target lies on the b side. The tangent at a node is the
// one used by the rod (bisector of the adjacent elements).

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "octoarm/core.hpp"
#include "octoarm/geometry.hpp"

namespace octoarm {

struct SensoryReading {
  Field alpha;              // [rad], in (-pi, pi]
  double s_bar = 0.0;       // [m]
  std::size_t closest = 0;  // node index of s_bar
  double dist = 0.0;        // [m]
  bool touching = false;    // target within touch_radius of some node
};

inline constexpr double touch_radius = 1e-9;  // [m]

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline SensoryReading sense(const std::vector<Vec2>& r, const Field& element_angle, const Field& s_grid,
                            const Vec2& target) {
  const std::size_t n = r.size();
  if (element_angle.size() + 1 != n || s_grid.size() != n) {
    throw DomainError("sense: positions, angles and grid disagree in size");
  }
  const Field phi = node_angles(element_angle);
  SensoryReading out;
  out.alpha.resize(n);
  out.dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = target - r[i];
    const double dist = norm(d);
    if (dist < touch_radius) {
      out.alpha[i] = 0.0;
      out.touching = true;
    } else {
      const Vec2 a = tangent(phi[i]);
      out.alpha[i] = wrap_angle(std::atan2(cross(a, d), dot(a, d)));
    }
    // ties go to the larger s
    if (dist <= out.dist) {
      out.dist = dist;
      out.closest = i;
    }
  }
  out.s_bar = s_grid[out.closest];
  return out;
}

}  // namespace octoarm
