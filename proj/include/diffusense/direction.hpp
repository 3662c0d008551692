#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <vector>

namespace diffusense {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

/// A point on the unit sphere. Azimuth is measured from +x towards +y,
/// elevation from the horizontal plane towards +z (colatitude = pi/2 - elevation).
struct Direction {
  double azimuth = 0.0;    // [0, 2*pi)
  double elevation = 0.0;  // [-pi/2, pi/2]

  Direction() = default;

  Direction(double az, double el) {
    azimuth = std::fmod(az, kTwoPi);
    if (azimuth < 0.0) azimuth += kTwoPi;
    if (azimuth >= kTwoPi) azimuth = 0.0;  // fmod can land exactly on 2*pi
    elevation = std::clamp(el, -kHalfPi, kHalfPi);
  }
};

inline Eigen::Vector3d to_unit_vector(const Direction& dir) {
  const double ce = std::cos(dir.elevation);
  return {ce * std::cos(dir.azimuth), ce * std::sin(dir.azimuth), std::sin(dir.elevation)};
}

inline Direction direction_from_vector(const Eigen::Vector3d& v) {
  const Eigen::Vector3d u = v.normalized();
  return {std::atan2(u.y(), u.x()), std::asin(std::clamp(u.z(), -1.0, 1.0))};
}

enum class DirectionSetKind { packing, grid };

/// An ordered set of distinct directions, either a sphere packing (source
/// layouts) or a quasi-uniform grid (beam scanning / quadrature).
struct DirectionSet {
  std::vector<Direction> directions;
  DirectionSetKind kind = DirectionSetKind::grid;

  std::size_t size() const { return directions.size(); }
};

}  // namespace diffusense
