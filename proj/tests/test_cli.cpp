// End-to-end tests that drive the installed CLI binary through std::system.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diffusense/config.hpp"
#include "diffusense/covariance.hpp"
#include "diffusense/estimators.hpp"
#include "diffusense/field.hpp"
#include "diffusense/io.hpp"

#ifndef DIFFUSENSE_CLI_PATH
#error "DIFFUSENSE_CLI_PATH must point at the diffusense binary"
#endif

using namespace diffusense;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "diffusense_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int status = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const fs::path log = work_dir() / "last_run.log";
  const std::string cmd =
      env + " " + std::string(DIFFUSENSE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult result;
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.output = read_text_file(log);
  return result;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path path = work_dir() / name;
  std::ofstream(path) << text;
  return path;
}

std::string single_source_scenario(double beta, std::uint64_t seed, std::int64_t samples) {
  std::ostringstream text;
  text << R"({"order": 3, "beta": )" << beta << R"(, "samples": )" << samples
       << R"(, "seed": )" << seed
       << R"(, "sources": [{"azimuth_deg": 30.0, "elevation_deg": 10.0, "power": 1.0}]})";
  return text.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::istringstream cols(line);
    for (std::string cell; std::getline(cols, cell, ',');) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 64") {
  CHECK(run_cli("").status == 64);
  CHECK(run_cli("frobnicate").status == 64);
  CHECK(run_cli("simulate --config x").status == 64);  // missing --out
  CHECK(run_cli("--help").status == 0);
}

TEST_CASE("simulate writes deterministic raw blocks plus metadata") {
  const auto config = write_file("scenario.json", single_source_scenario(0.0, 7, 256));
  const auto out_a = work_dir() / "block_a.raw";
  const auto out_b = work_dir() / "block_b.raw";
  CHECK(run_cli("simulate --config " + config.string() + " --out " + out_a.string()).status == 0);
  CHECK(run_cli("simulate --config " + config.string() + " --out " + out_b.string()).status == 0);
  CHECK(read_text_file(out_a) == read_text_file(out_b));  // byte-identical
  CHECK(fs::exists(out_a.string() + ".meta.json"));

  const SHSignalBlock block = read_raw_block(out_a);
  CHECK(block.order == 3);
  CHECK(block.samples() == 256);
  // beta = 0, one source: rank-1 block
  const Eigen::VectorXd values = eigenvalues(estimate_covariance(block)).values;
  CHECK(values[1] <= 1e-12 * values[0]);

  // a different seed changes the bytes
  const auto config2 = write_file("scenario2.json", single_source_scenario(0.0, 8, 256));
  const auto out_c = work_dir() / "block_c.raw";
  CHECK(run_cli("simulate --config " + config2.string() + " --out " + out_c.string()).status ==
        0);
  CHECK(read_text_file(out_a) != read_text_file(out_c));
}

TEST_CASE("simulate rejects invalid configs naming the field") {
  const auto bad = write_file("bad.json", R"({"order": 3, "beta": 1.2})");
  const RunResult result =
      run_cli("simulate --config " + bad.string() + " --out " + (work_dir() / "x.raw").string());
  CHECK(result.status == 65);
  CHECK(result.output.find("beta") != std::string::npos);

  const RunResult missing = run_cli("simulate --config " + (work_dir() / "nope.json").string() +
                                    " --out " + (work_dir() / "x.raw").string());
  CHECK(missing.status == 74);
}

TEST_CASE("simulate then analyze reproduces the in-process profile (raw)") {
  const auto config_text = single_source_scenario(0.5, 2024, 4096);
  const auto config = write_file("round.json", config_text);
  const auto block_path = work_dir() / "round.raw";
  REQUIRE(run_cli("simulate --config " + config.string() + " --out " + block_path.string())
              .status == 0);

  const auto report = work_dir() / "round.csv";
  REQUIRE(run_cli("analyze " + block_path.string() +
                  " --order 3 --frame-len 4096 --estimators comedie --out " + report.string())
              .status == 0);

  const auto rows = parse_csv(read_text_file(report));
  REQUIRE(rows.size() == 2);  // header + one frame
  REQUIRE(rows[0].size() >= 5);
  CHECK(rows[0][0] == "frame");
  CHECK(rows[0][2] == "comedie_d1");

  // reference values straight from the library
  const ScenarioConfig scenario = parse_scenario_config(config_text);
  const DiffusenessProfile expected =
      profile(estimate_covariance(synthesize(scenario)), Estimator::comedie);
  for (int l = 0; l < 3; ++l) {
    const double reported = std::stod(rows[1][static_cast<std::size_t>(2 + l)]);
    CHECK(std::abs(reported - expected.values[static_cast<std::size_t>(l)]) <= 1e-9);
    CHECK(std::abs(reported - 0.5) <= 0.05);  // d = beta up to sampling noise
  }
}

TEST_CASE("wav path round trips within quantization") {
  const auto config = write_file("wav.json", single_source_scenario(0.5, 77, 2048));
  const auto wav_path = work_dir() / "round.wav";
  REQUIRE(run_cli("simulate --config " + config.string() + " --out " + wav_path.string())
              .status == 0);
  const RunResult analyzed =
      run_cli("analyze " + wav_path.string() + " --order 3 --frame-len 2048 --estimators comedie");
  CHECK(analyzed.status == 0);
  const auto rows = parse_csv(analyzed.output);
  REQUIRE(rows.size() >= 2);
  const ScenarioConfig scenario =
      parse_scenario_config(read_text_file(config));
  const DiffusenessProfile expected =
      profile(estimate_covariance(synthesize(scenario)), Estimator::comedie);
  CHECK(std::abs(std::stod(rows[1][2]) - expected.values[0]) <= 1e-4);
}

TEST_CASE("analyze validates the channel count") {
  const auto config = write_file("order1.json",
                                 R"({"order": 1, "beta": 1.0, "samples": 512, "seed": 3})");
  const auto block_path = work_dir() / "order1.raw";
  REQUIRE(run_cli("simulate --config " + config.string() + " --out " + block_path.string())
              .status == 0);
  const RunResult mismatch = run_cli("analyze " + block_path.string() + " --order 3");
  CHECK(mismatch.status == 65);
  CHECK(mismatch.output.find("16") != std::string::npos);
}

TEST_CASE("analyze tiles frames and warns on oversized frames") {
  const auto config = write_file("frames.json", single_source_scenario(0.3, 5, 1000));
  const auto block_path = work_dir() / "frames.raw";
  REQUIRE(run_cli("simulate --config " + config.string() + " --out " + block_path.string())
              .status == 0);

  const RunResult hopped = run_cli("analyze " + block_path.string() +
                                   " --order 3 --frame-len 256 --hop 128 --estimators dirac");
  CHECK(hopped.status == 0);
  CHECK(parse_csv(hopped.output).size() == 1 + (1000 - 256) / 128 + 1);

  const RunResult oversized =
      run_cli("analyze " + block_path.string() + " --order 3 --frame-len 4096");
  CHECK(oversized.status == 0);
  CHECK(oversized.output.find("warning") != std::string::npos);
}

TEST_CASE("pure noise analyzes as nearly diffuse") {
  const auto config =
      write_file("noise.json", R"({"order": 3, "beta": 1.0, "samples": 1024, "seed": 11})");
  const auto block_path = work_dir() / "noise.raw";
  REQUIRE(run_cli("simulate --config " + config.string() + " --out " + block_path.string())
              .status == 0);
  const RunResult analyzed = run_cli("analyze " + block_path.string() + " --order 3");
  CHECK(analyzed.status == 0);
  const auto rows = parse_csv(analyzed.output);
  REQUIRE(rows.size() == 2);
  for (std::size_t col = 2; col < 2 + 9; ++col)  // three estimators, three orders each
    CHECK(std::stod(rows[1][col]) >= 0.9);
}

TEST_CASE("sweep command writes the documented files") {
  const auto spec = write_file("sweep.json", R"({
    "experiment": "sweep",
    "estimators": ["comedie", "dirac", "thiele_gover"],
    "orders": [1, 2, 3],
    "q_values": [1, 2],
    "beta_values": [0.0, 1.0],
    "covariance_mode": "analytic"
  })");
  const auto out = work_dir() / "sweep_out";
  CHECK(run_cli("sweep --config " + spec.string() + " --out " + out.string()).status == 0);
  CHECK(fs::exists(out / "sweep.csv"));
  int matrices = 0;
  for (const auto& entry : fs::directory_iterator(out))
    if (entry.path().filename().string().rfind("sweep_", 0) == 0) ++matrices;
  CHECK(matrices == 9);  // 3 estimators x 3 orders

  const auto transition = write_file("transition.json", R"({
    "experiment": "transition",
    "orders": [1, 2],
    "q_values": [1, 2, 4],
    "samples": 512,
    "seeds": 2
  })");
  const auto tout = work_dir() / "transition_out";
  CHECK(run_cli("sweep --config " + transition.string() + " --out " + tout.string()).status == 0);
  const auto rows = parse_csv(read_text_file(tout / "transition.csv"));
  REQUIRE(rows.size() == 3);  // header + 2 orders
  CHECK(rows[0].size() == 4);  // label + 3 Q columns

  const auto empty = write_file("empty.json", R"({
    "experiment": "sweep",
    "orders": [1],
    "q_values": [],
    "beta_values": [0.0]
  })");
  const RunResult failed = run_cli("sweep --config " + empty.string() + " --out " + out.string());
  CHECK(failed.status == 65);  // distinct from I/O failures
  CHECK(failed.status != 74);
}

TEST_CASE("sweep respects the thread cap and stays deterministic") {
  const auto spec = write_file("threads.json", R"({
    "experiment": "sweep",
    "estimators": ["comedie"],
    "orders": [1, 2],
    "q_values": [1, 4],
    "beta_values": [0.0, 0.5],
    "samples": 512,
    "seeds": 2,
    "seed_base": 31415
  })");
  const auto out1 = work_dir() / "threads1";
  const auto out4 = work_dir() / "threads4";
  CHECK(run_cli("sweep --config " + spec.string() + " --out " + out1.string(),
                "DIFFUSENSE_THREADS=1").status == 0);
  CHECK(run_cli("sweep --config " + spec.string() + " --out " + out4.string(),
                "DIFFUSENSE_THREADS=4").status == 0);
  CHECK(read_text_file(out1 / "sweep.csv") == read_text_file(out4 / "sweep.csv"));
}

}  // TEST_SUITE
