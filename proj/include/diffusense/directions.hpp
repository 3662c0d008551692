#pragma once

#include "diffusense/direction.hpp"

namespace diffusense {

/// Q directions forming a quasi-optimal sphere packing. Deterministic: points
/// start on a Fibonacci lattice and are refined by inverse-power repulsion.
/// Q = 1 is the +x axis, Q = 2 the antipodal pair on the x axis.
DirectionSet packing_directions(int count);

/// Spherical Fibonacci lattice of N points. Deterministic.
DirectionSet fibonacci_grid(int count);

/// Best-known minimum pairwise angle (radians) of a Q-point packing,
/// 2 <= Q <= 30. Reference data for accuracy checks.
double packing_reference_min_angle(int count);

/// Smallest pairwise angular distance within a set (pi for fewer than 2 points).
double min_pairwise_angle(const DirectionSet& set);

}  // namespace diffusense
