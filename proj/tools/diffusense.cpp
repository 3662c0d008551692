// Command-line front end: scenario synthesis, experiment sweeps and framewise
// diffuseness analysis of recorded SH signal files (ACN order, N3D).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "diffusense/config.hpp"
#include "diffusense/covariance.hpp"
#include "diffusense/detail/format.hpp"
#include "diffusense/estimators.hpp"
#include "diffusense/experiments.hpp"
#include "diffusense/field.hpp"
#include "diffusense/io.hpp"

namespace {

using namespace diffusense;

// Exit statuses partition into success / usage / validation / I/O (sysexits).
constexpr int kExitOk = 0;
constexpr int kExitUsage = 64;
constexpr int kExitValidation = 65;
constexpr int kExitIo = 74;

int env_thread_cap() {
  const char* raw = std::getenv("DIFFUSENSE_THREADS");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1) {
    std::cerr << "warning: ignoring invalid DIFFUSENSE_THREADS='" << raw << "'\n";
    return 0;
  }
  return static_cast<int>(value);
}

std::optional<BlockFormat> parse_format_flag(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "raw") return BlockFormat::raw;
  if (name == "wav") return BlockFormat::wav;
  throw CLI::ValidationError("--format", "expected 'wav' or 'raw'");
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& format_flag, std::optional<std::uint64_t> seed_override) {
  ScenarioConfig config = parse_scenario_config(read_text_file(config_path));
  if (seed_override) config.seed = *seed_override;

  auto format = parse_format_flag(format_flag);
  if (!format) format = format_from_extension(out_path);
  if (!format) format = BlockFormat::raw;

  const SHSignalBlock block = synthesize(config);
  if (*format == BlockFormat::raw)
    write_raw_block(block, out_path);
  else
    write_wav_block(block, out_path);
  write_block_metadata(config, *format, out_path);
  std::cerr << "wrote " << block.channels() << "-channel block (" << block.samples()
            << " samples) to " << out_path << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
  const ExperimentSpec spec = parse_experiment_spec(read_text_file(spec_path));
  const int threads = env_thread_cap();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");
  const std::filesystem::path dir(out_dir);

  if (spec.kind == ExperimentKind::sweep) {
    const SweepResult result = run_sweep(spec.sweep, threads);
    write_text_file(dir / "sweep.csv", sweep_to_csv(result));
    for (const auto& [stem, csv] : sweep_to_matrix_csv(result))
      write_text_file(dir / ("sweep_" + stem + ".csv"), csv);
    std::cerr << "wrote " << result.records.size() << " sweep records to " << out_dir << "\n";
  } else {
    const SweepResult result = run_transition(spec.sweep.orders, spec.sweep.q_values,
                                              spec.sweep.samples, spec.sweep.seeds,
                                              spec.sweep.seed_base, threads);
    write_text_file(dir / "transition_long.csv", sweep_to_csv(result));
    write_text_file(dir / "transition.csv", transition_to_matrix_csv(result));
    std::cerr << "wrote " << result.records.size() << " transition records to " << out_dir
              << "\n";
  }
  return kExitOk;
}

int cmd_analyze(const std::string& input_path, const std::string& out_path, long frame_len,
                long hop, int order, const std::vector<std::string>& estimator_names,
                const std::string& format_flag) {
  std::vector<Estimator> estimators;
  if (estimator_names.empty()) {
    estimators = {Estimator::comedie, Estimator::dirac, Estimator::thiele_gover};
  } else {
    for (const auto& name : estimator_names) estimators.push_back(estimator_from_string(name));
  }

  const LoadedSignal signal = read_signal(input_path, parse_format_flag(format_flag));
  const Eigen::Index expected = channel_count(order);
  if (signal.data.rows() != expected)
    throw std::invalid_argument("input has " + std::to_string(signal.data.rows()) +
                                " channels but order " + std::to_string(order) + " requires " +
                                std::to_string(expected));
  if (!signal.data.allFinite())
    throw std::invalid_argument("input contains non-finite samples");

  Eigen::Index frame = static_cast<Eigen::Index>(frame_len);
  if (frame > signal.data.cols()) {
    std::cerr << "warning: frame length " << frame << " exceeds file length "
              << signal.data.cols() << "; analyzing one full-file frame\n";
    frame = signal.data.cols();
  }

  std::string csv = "frame,time_s";
  for (const Estimator est : estimators)
    for (int l = 1; l <= order; ++l) csv += ',' + to_string(est) + "_d" + std::to_string(l);
  for (Eigen::Index i = 0; i < expected; ++i) csv += ",eig_" + std::to_string(i + 1);
  csv += '\n';

  long index = 0;
  for (Eigen::Index start = 0; start + frame <= signal.data.cols();
       start += static_cast<Eigen::Index>(hop), ++index) {
    const SHSignalBlock block{order, signal.data.middleCols(start, frame)};
    const CovarianceMatrix cov = estimate_covariance(block);
    csv += std::to_string(index) + ',' +
           detail::format_double(double(start) / signal.sample_rate);
    for (const Estimator est : estimators)
      for (const double d : profile(cov, est).values) csv += ',' + detail::format_double(d);
    const EigenSpectrum spectrum = eigenvalues(cov);
    for (Eigen::Index i = 0; i < spectrum.values.size(); ++i)
      csv += ',' + detail::format_double(spectrum.values[i]);
    csv += '\n';
  }

  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical-harmonic sound field diffuseness analysis"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_flag;
  std::optional<std::uint64_t> seed_override;

  auto* simulate = app.add_subcommand("simulate", "Synthesize an SH signal block from a scenario");
  simulate->add_option("--config", config_path, "Scenario config (JSON)")->required();
  simulate->add_option("--out", out_path, "Output block file (.wav or .raw)")->required();
  simulate->add_option("--format", format_flag, "Force output format: wav or raw");
  simulate->add_option("--seed", seed_override, "Override the config seed");

  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep to CSV files");
  sweep->add_option("--config", config_path, "Experiment spec (JSON)")->required();
  sweep->add_option("--out", out_path, "Output directory")->required();

  std::string input_path;
  long frame_len = 1024, hop = 0;
  int order = 3;
  std::vector<std::string> estimator_names;
  auto* analyze = app.add_subcommand("analyze", "Framewise diffuseness profiles of an SH file");
  analyze->add_option("input", input_path, "Input block file (.wav or .raw)")->required();
  analyze->add_option("--out", out_path, "Output CSV (default: stdout)");
  analyze->add_option("--frame-len", frame_len, "Frame length in samples")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--hop", hop, "Hop size in samples (default: frame length)")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--order", order, "SH order of the input")->check(CLI::PositiveNumber);
  analyze->add_option("--estimators", estimator_names,
                      "Estimators: comedie, dirac, thiele_gover (default: all)")
      ->delimiter(',');
  analyze->add_option("--format", format_flag, "Force input format: wav or raw");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(config_path, out_path, format_flag, seed_override);
    if (sweep->parsed()) return cmd_sweep(config_path, out_path);
    if (hop == 0) hop = frame_len;
    return cmd_analyze(input_path, out_path, frame_len, hop, order, estimator_names, format_flag);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
