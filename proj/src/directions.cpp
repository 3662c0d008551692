#include "diffusense/directions.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace diffusense {
namespace {

// Best-known packing angles for Q = 2..30 (degrees), from the standard
// Tammes-problem tables. Used only as an accuracy reference.
constexpr double kReferenceMinAngleDeg[] = {
    180.0,      120.0,      109.471221, 90.0,      90.0,       77.869542,  74.858492,
    70.528779,  66.146822,  63.434949,  63.434949, 57.136703,  55.670570,  53.657850,
    52.244396,  51.090328,  49.556655,  47.691914, 47.431036,  45.613223,  44.740161,
    43.709964,  43.690767,  41.634461,  41.037662, 40.677601,  39.355144,  38.713651,
    38.597116,
};

Eigen::Matrix3Xd fibonacci_points(int count) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::Matrix3Xd pts(3, count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    pts.col(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return pts;
}

// One repulsion pass: push every point along the tangential component of the
// summed inverse-power force, with the step normalized by the largest force.
void repulsion_pass(Eigen::Matrix3Xd& pts, double exponent, double step) {
  const int n = static_cast<int>(pts.cols());
  Eigen::Matrix3Xd force = Eigen::Matrix3Xd::Zero(3, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::Vector3d d = pts.col(i) - pts.col(j);
      const double dist = std::max(d.norm(), 1e-9);
      d *= 1.0 / std::pow(dist, exponent + 1.0);
      force.col(i) += d;
      force.col(j) -= d;
    }
  }
  double max_norm = 0.0;
  for (int i = 0; i < n; ++i) max_norm = std::max(max_norm, force.col(i).norm());
  if (max_norm <= 0.0) return;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d p = pts.col(i);
    const Eigen::Vector3d tangential = force.col(i) - p.dot(force.col(i)) * p;
    pts.col(i) = (p + (step / max_norm) * tangential).normalized();
  }
}

DirectionSet to_direction_set(const Eigen::Matrix3Xd& pts, DirectionSetKind kind) {
  DirectionSet set;
  set.kind = kind;
  set.directions.reserve(static_cast<std::size_t>(pts.cols()));
  for (int i = 0; i < pts.cols(); ++i) set.directions.push_back(direction_from_vector(pts.col(i)));
  return set;
}

}  // namespace

DirectionSet packing_directions(int count) {
  if (count < 1) throw std::invalid_argument("packing_directions: count must be >= 1");
  if (count == 1) return {{Direction(0.0, 0.0)}, DirectionSetKind::packing};
  if (count == 2)
    return {{Direction(0.0, 0.0), Direction(std::numbers::pi, 0.0)}, DirectionSetKind::packing};

  Eigen::Matrix3Xd pts = fibonacci_points(count);
  // Coulomb stage untangles the lattice; the steeper stage sharpens the
  // minimum pairwise distance towards the packing optimum.
  double step = 0.1;
  for (int it = 0; it < 600; ++it) {
    repulsion_pass(pts, 2.0, step);
    step *= 0.995;
  }
  step = 0.02;
  for (int it = 0; it < 900; ++it) {
    repulsion_pass(pts, 6.0, step);
    step *= 0.995;
  }
  return to_direction_set(pts, DirectionSetKind::packing);
}

DirectionSet fibonacci_grid(int count) {
  if (count < 1) throw std::invalid_argument("fibonacci_grid: count must be >= 1");
  return to_direction_set(fibonacci_points(count), DirectionSetKind::grid);
}

double packing_reference_min_angle(int count) {
  if (count < 2 || count > 30)
    throw std::invalid_argument("packing_reference_min_angle: table covers 2 <= Q <= 30");
  return kReferenceMinAngleDeg[count - 2] * std::numbers::pi / 180.0;
}

double min_pairwise_angle(const DirectionSet& set) {
  double min_angle = std::numbers::pi;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Eigen::Vector3d a = to_unit_vector(set.directions[i]);
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double dot = a.dot(to_unit_vector(set.directions[j]));
      min_angle = std::min(min_angle, std::acos(std::clamp(dot, -1.0, 1.0)));
    }
  }
  return min_angle;
}

}  // namespace diffusense
