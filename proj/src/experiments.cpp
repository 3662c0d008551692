#include "diffusense/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "diffusense/detail/format.hpp"
#include "diffusense/directions.hpp"

namespace diffusense {
namespace {

constexpr const char* kPackingSource = "fibonacci-seeded inverse-power repulsion";

std::uint64_t point_seed(std::uint64_t base, int order, int q, int beta_index, int seed_index) {
  std::uint64_t s = rng::derive_seed(base, 3, static_cast<std::uint64_t>(order));
  s = rng::derive_seed(s, 4, static_cast<std::uint64_t>(q));
  s = rng::derive_seed(s, 5, static_cast<std::uint64_t>(beta_index));
  return rng::derive_seed(s, 6, static_cast<std::uint64_t>(seed_index));
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= double(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= double(values.size());
  return {mean, std::sqrt(std::max(var, 0.0))};
}

int resolve_thread_count(int max_threads, std::size_t points) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int n = max_threads > 0 ? std::min(max_threads, hw) : hw;
  return std::max(1, std::min<int>(n, static_cast<int>(points)));
}

// Runs fn(point_index) over [0, count) on up to max_threads workers; the
// first exception aborts the run and is rethrown with its grid coordinates
// already attached by the caller's wrapper.
template <typename Fn>
void parallel_for_points(std::size_t count, int max_threads, Fn&& fn) {
  const int workers = resolve_thread_count(max_threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::map<int, DirectionSet> build_packings(const std::vector<int>& q_values) {
  std::map<int, DirectionSet> packings;
  for (int q : q_values)
    if (!packings.count(q)) packings.emplace(q, packing_directions(q));
  return packings;
}

ScenarioConfig scenario_for(int order, const DirectionSet& packing, Correlation correlation,
                            double beta, std::int64_t samples, std::uint64_t seed) {
  ScenarioConfig config;
  config.order = order;
  config.correlation = correlation;
  config.beta = beta;
  config.samples = samples;
  config.seed = seed;
  config.ignore_sources = beta == 1.0;
  config.sources.reserve(packing.size());
  for (const auto& dir : packing.directions) config.sources.push_back({dir, 1.0});
  return config;
}

[[noreturn]] void rethrow_with_point(int order, int q, double beta) {
  try {
    throw;
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "grid point L=" << order << " Q=" << q << " beta=" << detail::format_double(beta)
        << ": " << e.what();
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

SweepSpec default_sweep_spec() {
  SweepSpec spec;
  spec.estimators = {Estimator::comedie, Estimator::dirac, Estimator::thiele_gover};
  spec.orders = {1, 2, 3};
  for (int q = 1; q <= 36; ++q) spec.q_values.push_back(q);
  for (int i = 0; i <= 20; ++i) spec.beta_values.push_back(i / 20.0);
  return spec;
}

std::pair<std::vector<int>, std::vector<int>> default_transition_axes() {
  std::vector<int> q_values;
  for (int q = 1; q <= 36; ++q) q_values.push_back(q);
  return {{1, 2, 3, 4}, q_values};
}

SweepResult run_sweep(const SweepSpec& spec, int max_threads) {
  if (spec.estimators.empty() || spec.orders.empty() || spec.q_values.empty() ||
      spec.beta_values.empty())
    throw std::invalid_argument("run_sweep: all sweep axes must be non-empty");
  if (spec.seeds < 1) throw std::invalid_argument("run_sweep: seeds must be >= 1");
  for (double beta : spec.beta_values)
    if (!(beta >= 0.0 && beta <= 1.0))
      throw std::invalid_argument("run_sweep: beta values must lie in [0, 1]");

  const auto packings = build_packings(spec.q_values);
  const bool wants_scan =
      std::find(spec.estimators.begin(), spec.estimators.end(), Estimator::thiele_gover) !=
      spec.estimators.end();
  if (wants_scan) {
    // Warm the mu0 caches so workers only read them.
    for (int order : spec.orders)
      for (int l = 1; l <= order; ++l) reference_mu0(l, default_scan_grid(l));
  }

  const std::size_t n_orders = spec.orders.size();
  const std::size_t n_q = spec.q_values.size();
  const std::size_t n_beta = spec.beta_values.size();
  const std::size_t n_points = n_orders * n_q * n_beta;
  const int n_runs = spec.covariance_mode == CovarianceMode::analytic ? 1 : spec.seeds;

  // point-major, estimator-minor storage, filled independently per point
  std::vector<std::vector<double>> point_samples(n_points * spec.estimators.size());

  parallel_for_points(n_points, max_threads, [&](std::size_t index) {
    const int oi = static_cast<int>(index / (n_q * n_beta));
    const int qi = static_cast<int>((index / n_beta) % n_q);
    const int bi = static_cast<int>(index % n_beta);
    const int order = spec.orders[static_cast<std::size_t>(oi)];
    const int q = spec.q_values[static_cast<std::size_t>(qi)];
    const double beta = spec.beta_values[static_cast<std::size_t>(bi)];
    try {
      for (int run = 0; run < n_runs; ++run) {
        const ScenarioConfig config =
            scenario_for(order, packings.at(q), spec.correlation, beta, spec.samples,
                         point_seed(spec.seed_base, order, q, bi, run));
        const CovarianceMatrix cov = spec.covariance_mode == CovarianceMode::analytic
                                         ? analytic_covariance(config)
                                         : estimate_covariance(synthesize(config));
        for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
          double value = 0.0;
          switch (spec.estimators[e]) {
            case Estimator::comedie: value = comedie(eigenvalues(cov)); break;
            case Estimator::dirac: value = dirac(cov); break;
            case Estimator::thiele_gover: value = thiele_gover(cov); break;
          }
          point_samples[index * spec.estimators.size() + e].push_back(value);
        }
      }
    } catch (...) {
      rethrow_with_point(order, q, beta);
    }
  });

  SweepResult result;
  result.metadata = {spec.seed_base, kGeneratorName, kPackingSource};
  result.records.reserve(n_points * spec.estimators.size());
  for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
    for (std::size_t oi = 0; oi < n_orders; ++oi) {
      for (std::size_t qi = 0; qi < n_q; ++qi) {
        for (std::size_t bi = 0; bi < n_beta; ++bi) {
          const std::size_t index = (oi * n_q + qi) * n_beta + bi;
          const auto [mean, dev] = mean_and_std(point_samples[index * spec.estimators.size() + e]);
          result.records.push_back({to_string(spec.estimators[e]), spec.orders[oi],
                                    spec.q_values[qi], spec.beta_values[bi], mean, dev});
        }
      }
    }
  }
  return result;
}

SweepResult run_transition(const std::vector<int>& orders, const std::vector<int>& q_values,
                           std::int64_t samples, int seeds, std::uint64_t seed_base,
                           int max_threads) {
  if (orders.empty() || q_values.empty())
    throw std::invalid_argument("run_transition: all axes must be non-empty");
  if (seeds < 1) throw std::invalid_argument("run_transition: seeds must be >= 1");

  const auto packings = build_packings(q_values);
  const std::size_t n_points = orders.size() * q_values.size();
  std::vector<std::vector<double>> xi_samples(n_points);

  parallel_for_points(n_points, max_threads, [&](std::size_t index) {
    const std::size_t oi = index / q_values.size();
    const std::size_t qi = index % q_values.size();
    const int order = orders[oi];
    const int q = q_values[qi];
    try {
      for (int run = 0; run < seeds; ++run) {
        const ScenarioConfig config =
            scenario_for(order, packings.at(q), Correlation::uncorrelated, 0.0, samples,
                         point_seed(seed_base, order, q, 0, run));
        xi_samples[index].push_back(mismatch_xi(estimate_covariance(synthesize(config))));
      }
    } catch (...) {
      rethrow_with_point(order, q, 0.0);
    }
  });

  SweepResult result;
  result.metadata = {seed_base, kGeneratorName, kPackingSource};
  for (std::size_t oi = 0; oi < orders.size(); ++oi) {
    for (std::size_t qi = 0; qi < q_values.size(); ++qi) {
      const auto [mean, dev] = mean_and_std(xi_samples[oi * q_values.size() + qi]);
      result.records.push_back({"xi", orders[oi], q_values[qi], 0.0, mean, dev});
    }
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "quantity,L,Q,beta,mean,std\n";
  for (const auto& rec : result.records) {
    out += rec.quantity + ',' + std::to_string(rec.order) + ',' + std::to_string(rec.q) + ',' +
           detail::format_double(rec.beta) + ',' + detail::format_double(rec.mean) + ',' +
           detail::format_double(rec.stddev) + '\n';
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> sweep_to_matrix_csv(const SweepResult& result) {
  // Collect the axes in first-appearance order.
  std::vector<std::pair<std::string, int>> sheets;
  std::vector<int> q_axis;
  std::vector<double> beta_axis;
  for (const auto& rec : result.records) {
    if (std::find(sheets.begin(), sheets.end(), std::pair{rec.quantity, rec.order}) == sheets.end())
      sheets.emplace_back(rec.quantity, rec.order);
    if (std::find(q_axis.begin(), q_axis.end(), rec.q) == q_axis.end()) q_axis.push_back(rec.q);
    if (std::find(beta_axis.begin(), beta_axis.end(), rec.beta) == beta_axis.end())
      beta_axis.push_back(rec.beta);
  }

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& [quantity, order] : sheets) {
    std::string csv = "beta";
    for (int q : q_axis) csv += ",Q=" + std::to_string(q);
    csv += '\n';
    for (double beta : beta_axis) {
      csv += detail::format_double(beta);
      for (int q : q_axis) {
        for (const auto& rec : result.records) {
          if (rec.quantity == quantity && rec.order == order && rec.q == q && rec.beta == beta) {
            csv += ',' + detail::format_double(rec.mean);
            break;
          }
        }
      }
      csv += '\n';
    }
    files.emplace_back(quantity + "_L" + std::to_string(order), std::move(csv));
  }
  return files;
}

std::string transition_to_matrix_csv(const SweepResult& result) {
  std::vector<int> orders;
  std::vector<int> q_axis;
  for (const auto& rec : result.records) {
    if (std::find(orders.begin(), orders.end(), rec.order) == orders.end())
      orders.push_back(rec.order);
    if (std::find(q_axis.begin(), q_axis.end(), rec.q) == q_axis.end()) q_axis.push_back(rec.q);
  }
  std::string csv = "order";
  for (int q : q_axis) csv += ",Q=" + std::to_string(q);
  csv += '\n';
  for (int order : orders) {
    csv += std::to_string(order);
    for (int q : q_axis) {
      for (const auto& rec : result.records) {
        if (rec.order == order && rec.q == q) {
          csv += ',' + detail::format_double(rec.mean);
          break;
        }
      }
    }
    csv += '\n';
  }
  return csv;
}

}  // namespace diffusense
