#include "diffusense/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include "diffusense/directions.hpp"
#include "diffusense/sh.hpp"

namespace diffusense {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Beam energies e(dir_n) = y_n^T C y_n / (L+1)^4, the expectation of the
// squared maximum-directivity beamformer output.
Eigen::VectorXd beam_energies(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& cov) {
  const double dim = double(cov.rows());
  return ((basis * cov).cwiseProduct(basis)).rowwise().sum() / (dim * dim);
}

// Normalized mean absolute deviation sum_n |e_n - <e>| / <e>.
double mean_energy_deviation(const Eigen::VectorXd& energies) {
  const double mean = energies.mean();
  if (mean <= 0.0) return 0.0;
  return (energies.array() - mean).abs().sum() / mean;
}

std::uint64_t hash_grid(int order, const DirectionSet& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(order);
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = (h ^ bits) * 0x100000001b3ULL;
  };
  for (const auto& dir : grid.directions) {
    mix(dir.azimuth);
    mix(dir.elevation);
  }
  return h;
}

constexpr int kReferenceWaveCount = 100;

}  // namespace

std::string to_string(Estimator estimator) {
  switch (estimator) {
    case Estimator::comedie: return "comedie";
    case Estimator::dirac: return "dirac";
    case Estimator::thiele_gover: return "thiele_gover";
  }
  throw std::invalid_argument("to_string: unknown estimator");
}

Estimator estimator_from_string(const std::string& name) {
  if (name == "comedie") return Estimator::comedie;
  if (name == "dirac") return Estimator::dirac;
  if (name == "thiele_gover") return Estimator::thiele_gover;
  throw std::invalid_argument("unknown estimator '" + name +
                              "' (expected comedie, dirac or thiele_gover)");
}

double comedie(const EigenSpectrum& spectrum) {
  const Eigen::Index dim = spectrum.values.size();
  if (dim < 4) throw std::invalid_argument("comedie: spectrum must come from order >= 1");
  const double scale = spectrum.values.cwiseAbs().sum();
  if (scale == 0.0) return 1.0;  // silence convention
  Eigen::VectorXd v = spectrum.values;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (v[i] < 0.0) {
      if (v[i] < -1e-12 * scale)
        throw std::invalid_argument("comedie: spectrum is not positive semidefinite");
      v[i] = 0.0;  // eigensolver roundoff
    }
  }
  const double mean = v.mean();
  if (mean == 0.0) return 1.0;
  const double gamma = (v.array() - mean).abs().sum() / mean;
  const double gamma0 = 2.0 * (double(dim) - 1.0);
  return clamp01(1.0 - gamma / gamma0);
}

double dirac(const CovarianceMatrix& cov) {
  if (cov.order() < 1) throw std::invalid_argument("dirac: requires order >= 1");
  const CovarianceMatrix low = truncate(cov, 1);
  const Eigen::MatrixXd& c = low.data();
  const double energy = c.trace();
  if (energy <= 0.0) return 1.0;  // silence convention
  // ACN channels: 1 = Y_1^-1 (y axis), 2 = Y_1^0 (z axis), 3 = Y_1^1 (x axis).
  const Eigen::Vector3d intensity(c(0, 3), c(0, 1), c(0, 2));
  const double flow = 4.0 / std::sqrt(3.0) * intensity.norm();
  // cross-covariances at machine-noise level carry no net flow
  if (flow <= 1e-14 * energy) return 1.0;
  return clamp01(1.0 - flow / energy);
}

double reference_mu0(int order, const DirectionSet& grid) {
  if (grid.size() == 0) throw std::invalid_argument("reference_mu0: empty grid");

  static std::mutex cache_mutex;
  static std::map<std::uint64_t, double> cache;
  const std::uint64_t key = hash_grid(order, grid);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const Eigen::MatrixXd basis = sh_basis_matrix(order, grid);
  const DirectionSet waves = fibonacci_grid(kReferenceWaveCount);
  const double dim = double(channel_count(order));
  double sum = 0.0;
  for (const auto& wave : waves.directions) {
    // Single plane wave: C = y0 y0^T, so e_n = (y_n . y0)^2 / (L+1)^4.
    const Eigen::VectorXd projections = basis * sh_vector(order, wave);
    sum += mean_energy_deviation(projections.array().square().matrix() / (dim * dim));
  }
  const double mu0 = sum / kReferenceWaveCount;

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(key, mu0);
  return mu0;
}

double thiele_gover(const CovarianceMatrix& cov, const DirectionSet& grid) {
  if (grid.size() == 0) throw std::invalid_argument("thiele_gover: empty grid");
  const Eigen::MatrixXd basis = sh_basis_matrix(cov.order(), grid);
  const Eigen::VectorXd energies = beam_energies(basis, cov.data());
  if (energies.mean() <= 0.0) return 1.0;  // silence convention
  const double mu = mean_energy_deviation(energies);
  const double mu0 = reference_mu0(cov.order(), grid);
  if (mu0 <= 0.0) return 1.0;  // order 0: beams are omnidirectional, degenerate
  // energy deviations at machine-noise level scan as perfectly even
  if (mu <= 1e-12 * mu0) return 1.0;
  return clamp01(1.0 - mu / mu0);
}

DirectionSet default_scan_grid(int order) { return fibonacci_grid(16 * channel_count(order)); }

double thiele_gover(const CovarianceMatrix& cov) {
  return thiele_gover(cov, default_scan_grid(cov.order()));
}

DiffusenessProfile profile(const CovarianceMatrix& cov, Estimator estimator) {
  if (cov.order() < 1) throw std::invalid_argument("profile: requires order >= 1");
  DiffusenessProfile result;
  result.order = cov.order();
  result.order_invariant = estimator == Estimator::dirac;
  result.values.reserve(static_cast<std::size_t>(cov.order()));
  if (estimator == Estimator::dirac) {
    result.values.assign(static_cast<std::size_t>(cov.order()), dirac(cov));
    return result;
  }
  for (int l = 1; l <= cov.order(); ++l) {
    const CovarianceMatrix sub = truncate(cov, l);
    result.values.push_back(estimator == Estimator::comedie ? comedie(eigenvalues(sub))
                                                            : thiele_gover(sub));
  }
  return result;
}

double drr_to_beta(double drr_db) {
  if (!std::isfinite(drr_db)) throw std::invalid_argument("drr_to_beta: non-finite input");
  return 1.0 / (1.0 + std::pow(10.0, drr_db / 10.0));
}

}  // namespace diffusense
