#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diffusense/estimators.hpp"
#include "diffusense/field.hpp"

namespace diffusense {

enum class CovarianceMode { empirical, analytic };

/// Axes of a diffuseness sweep over (order, source count, relative noise
/// level). Sources are equal-power plane waves on a Q-point packing.
struct SweepSpec {
  std::vector<Estimator> estimators;
  std::vector<int> orders;
  std::vector<int> q_values;
  std::vector<double> beta_values;
  Correlation correlation = Correlation::uncorrelated;
  std::int64_t samples = 1024;
  int seeds = 10;
  std::uint64_t seed_base = 0;
  CovarianceMode covariance_mode = CovarianceMode::empirical;
};

struct SweepRecord {
  std::string quantity;  // estimator name, or "xi" for transition runs
  int order = 0;
  int q = 0;
  double beta = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct SweepMetadata {
  std::uint64_t seed_base = 0;
  std::string generator;
  std::string packing_source;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  SweepMetadata metadata;
};

/// Spec with the default axes: all three estimators, orders 1..3,
/// Q = 1..36, beta = 0, 0.05, ..., 1, T = 1024, 10 seeds, empirical.
SweepSpec default_sweep_spec();

/// Default transition axes: orders 1..4, Q = 1..36, T = 1024, 10 seeds.
std::pair<std::vector<int>, std::vector<int>> default_transition_axes();

/// Evaluate every estimator on every (order, Q, beta) grid point, averaging
/// over seeds in empirical mode. Grid points are independent; max_threads
/// caps the worker count (0 = hardware concurrency). Deterministic given
/// seed_base regardless of thread count.
SweepResult run_sweep(const SweepSpec& spec, int max_threads = 0);

/// Diffuse-field mismatch xi of the empirical covariance per (order, Q) at
/// beta = 0, averaged over seeds.
SweepResult run_transition(const std::vector<int>& orders, const std::vector<int>& q_values,
                           std::int64_t samples, int seeds, std::uint64_t seed_base = 0,
                           int max_threads = 0);

/// Long-format CSV: quantity,L,Q,beta,mean,std.
std::string sweep_to_csv(const SweepResult& result);

/// Plot-ready matrices, one per (quantity, order): beta rows, Q columns.
/// Returns (filename stem, csv text) pairs.
std::vector<std::pair<std::string, std::string>> sweep_to_matrix_csv(const SweepResult& result);

/// Transition matrix: one row per order, one column per Q.
std::string transition_to_matrix_csv(const SweepResult& result);

}  // namespace diffusense
