#include "diffusense/field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "diffusense/sh.hpp"

namespace diffusense {
namespace {

bool sources_active(const ScenarioConfig& config) {
  return !config.sources.empty() && !(config.beta == 1.0 && config.ignore_sources);
}

// Channels x Q matrix of steering vectors y_q.
Eigen::MatrixXd steering_matrix(const ScenarioConfig& config) {
  Eigen::MatrixXd y(channel_count(config.order),
                    static_cast<Eigen::Index>(config.sources.size()));
  for (std::size_t q = 0; q < config.sources.size(); ++q)
    y.col(static_cast<Eigen::Index>(q)) = sh_vector(config.order, config.sources[q].direction);
  return y;
}

// Expected total directional SH power under the configured correlation model.
double directional_power(const ScenarioConfig& config) {
  if (!sources_active(config)) return 0.0;
  if (config.correlation == Correlation::uncorrelated) {
    double total = 0.0;
    for (const auto& src : config.sources) total += src.power;
    return total * channel_count(config.order);
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(channel_count(config.order));
  for (const auto& src : config.sources)
    sum += std::sqrt(src.power) * sh_vector(config.order, src.direction);
  return sum.squaredNorm();
}

Eigen::MatrixXd gaussian_rows(int rows, Eigen::Index cols, std::uint64_t base_seed,
                              std::uint64_t stream_kind) {
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    std::mt19937_64 engine(rng::derive_seed(base_seed, stream_kind, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index t = 0; t < cols; ++t) out(r, t) = gauss(engine);
  }
  return out;
}

constexpr std::uint64_t kSourceStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

}  // namespace

namespace rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t kind, std::uint64_t index) {
  std::uint64_t state = base;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (kind * 0xd1342543de82ef95ULL);
  mixed = splitmix64(state);
  state = mixed ^ (index * 0xaf251af3b0f025b5ULL);
  return splitmix64(state);
}

}  // namespace rng

void validate(const ScenarioConfig& config) {
  if (config.order < 0) throw std::invalid_argument("ScenarioConfig: order must be >= 0");
  if (!(config.beta >= 0.0 && config.beta <= 1.0))
    throw std::invalid_argument("ScenarioConfig: beta must lie in [0, 1]");
  if (config.samples < 1) throw std::invalid_argument("ScenarioConfig: samples must be >= 1");
  for (const auto& src : config.sources)
    if (!(src.power > 0.0))
      throw std::invalid_argument("ScenarioConfig: source powers must be > 0");
  if (config.beta == 1.0 && !config.sources.empty() && !config.ignore_sources)
    throw std::invalid_argument(
        "ScenarioConfig: beta = 1 with sources present is ambiguous; drop the sources or set "
        "ignore_sources");
}

double noise_power(const ScenarioConfig& config) {
  validate(config);
  if (config.beta == 1.0) return 1.0;  // pure diffuse field, unit noise power
  return config.beta * directional_power(config) /
         ((1.0 - config.beta) * channel_count(config.order));
}

SHSignalBlock synthesize(const ScenarioConfig& config) {
  validate(config);
  const int channels = channel_count(config.order);
  const Eigen::Index t_count = static_cast<Eigen::Index>(config.samples);
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(channels, t_count);

  if (sources_active(config)) {
    const Eigen::MatrixXd y = steering_matrix(config);
    const int q_count = static_cast<int>(config.sources.size());
    if (config.correlation == Correlation::uncorrelated) {
      Eigen::MatrixXd signals = gaussian_rows(q_count, t_count, config.seed, kSourceStream);
      for (int q = 0; q < q_count; ++q)
        signals.row(q) *= std::sqrt(config.sources[static_cast<std::size_t>(q)].power);
      data.noalias() = y * signals;
    } else {
      const Eigen::MatrixXd shared = gaussian_rows(1, t_count, config.seed, kSourceStream);
      Eigen::VectorXd mixed = Eigen::VectorXd::Zero(channels);
      for (int q = 0; q < q_count; ++q)
        mixed += std::sqrt(config.sources[static_cast<std::size_t>(q)].power) * y.col(q);
      data.noalias() = mixed * shared;
    }
  }

  const double nu = noise_power(config);
  if (nu > 0.0)
    data += std::sqrt(nu) * gaussian_rows(channels, t_count, config.seed, kNoiseStream);

  return {config.order, std::move(data)};
}

CovarianceMatrix analytic_covariance(const ScenarioConfig& config) {
  validate(config);
  const int channels = channel_count(config.order);
  Eigen::MatrixXd cov = noise_power(config) * Eigen::MatrixXd::Identity(channels, channels);

  if (sources_active(config)) {
    if (config.correlation == Correlation::uncorrelated) {
      for (const auto& src : config.sources) {
        const Eigen::VectorXd y = sh_vector(config.order, src.direction);
        cov.noalias() += src.power * y * y.transpose();
      }
    } else {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(channels);
      for (const auto& src : config.sources)
        sum += std::sqrt(src.power) * sh_vector(config.order, src.direction);
      cov.noalias() += sum * sum.transpose();
    }
  }

  return {config.order, (cov + cov.transpose()) / 2.0};
}

}  // namespace diffusense
