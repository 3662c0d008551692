#pragma once

#include <string>
#include <vector>

#include "diffusense/covariance.hpp"
#include "diffusense/direction.hpp"

namespace diffusense {

enum class Estimator { comedie, dirac, thiele_gover };

std::string to_string(Estimator estimator);
Estimator estimator_from_string(const std::string& name);

/// Diffuseness estimates at SH orders 1..L obtained from nested covariance
/// truncations. DirAC only sees orders 0 and 1, so its profile is constant;
/// order_invariant flags that.
struct DiffusenessProfile {
  int order = 0;
  std::vector<double> values;  // values[k] = estimate at order k+1
  bool order_invariant = false;
};

/// COMEDIE diffuseness d = 1 - gamma/gamma0 from the eigenvalue
/// mean-deviation gamma; gamma0 = 2[(L+1)^2 - 1] is the single-plane-wave
/// value. An all-zero spectrum maps to 1 (silence carries no direction).
/// Result clamped to [0, 1].
double comedie(const EigenSpectrum& spectrum);

/// DirAC diffuseness psi = 1 - ||i|| / (c eps) from the order-0/1 covariance
/// entries; the speed of sound cancels. Requires order >= 1.
double dirac(const CovarianceMatrix& cov);

/// Thiele-Gover directional diffusion: scan maximum-directivity beams over
/// the grid, phi = 1 - mu/mu0 with mu the normalized mean deviation of beam
/// energy and mu0 its single-plane-wave reference.
double thiele_gover(const CovarianceMatrix& cov, const DirectionSet& grid);

/// Same, on the default grid of 16*(L+1)^2 Fibonacci points.
double thiele_gover(const CovarianceMatrix& cov);

/// Reference mean energy deviation for a single plane wave, averaged over 100
/// deterministic quasi-uniform wave directions. Cached per (order, grid);
/// safe under concurrent first access.
double reference_mu0(int order, const DirectionSet& grid);

DiffusenessProfile profile(const CovarianceMatrix& cov, Estimator estimator);

/// Relative noise level implied by a direct-to-reverberant ratio in dB,
/// beta = 1 / (1 + 10^(drr/10)).
double drr_to_beta(double drr_db);

/// Default beam-scan grid for an order-L analysis.
DirectionSet default_scan_grid(int order);

}  // namespace diffusense
