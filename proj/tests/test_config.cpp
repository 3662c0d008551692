#include <doctest.h>

#include <cmath>

#include "diffusense/config.hpp"

using namespace diffusense;

TEST_SUITE("config") {

TEST_CASE("scenario parsing") {
  const std::string text = R"({
    "order": 3,
    "beta": 0.5,
    "samples": 2048,
    "seed": 42,
    "correlation": "identical",
    "sources": [
      {"azimuth_deg": 90.0, "elevation_deg": 0.0, "power": 2.0},
      {"azimuth_deg": 270.0}
    ]
  })";
  const ScenarioConfig config = parse_scenario_config(text);
  CHECK(config.order == 3);
  CHECK(config.beta == 0.5);
  CHECK(config.samples == 2048);
  CHECK(config.seed == 42);
  CHECK(config.correlation == Correlation::identical);
  REQUIRE(config.sources.size() == 2);
  CHECK(config.sources[0].direction.azimuth == doctest::Approx(kHalfPi).epsilon(1e-14));
  CHECK(config.sources[0].power == 2.0);
  CHECK(config.sources[1].power == 1.0);  // default
}

TEST_CASE("scenario rejection names the field") {
  CHECK_THROWS_WITH_AS(parse_scenario_config(R"({"order": 3, "beta": 1.2})"),
                       doctest::Contains("beta"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario_config(R"({"order": 3, "betaa": 0.1})"),
                       doctest::Contains("betaa"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario_config(R"({"beta": 0.1})"), doctest::Contains("order"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_scenario_config(R"({"order": 1, "sources": [{"power": -2.0}]})"),
      doctest::Contains("power"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_scenario_config(R"({"order": 1, "sources": [{"elevation_deg": 91.0}]})"),
      doctest::Contains("elevation"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_config("order: 3"), ConfigError);  // not JSON
  CHECK_THROWS_AS(parse_scenario_config("[1,2]"), ConfigError);     // not an object
  // beta=1 with sources and no override is the ambiguous case
  CHECK_THROWS_AS(
      parse_scenario_config(R"({"order": 1, "beta": 1.0, "sources": [{"power": 1.0}]})"),
      ConfigError);
  CHECK_NOTHROW(parse_scenario_config(
      R"({"order": 1, "beta": 1.0, "ignore_sources": true, "sources": [{"power": 1.0}]})"));
}

TEST_CASE("scenario serialization round trips") {
  ScenarioConfig config;
  config.order = 2;
  config.beta = 0.25;
  config.samples = 128;
  config.seed = 7;
  config.sources = {{Direction(1.0, -0.5), 3.0}};
  const ScenarioConfig parsed = parse_scenario_config(scenario_config_to_json(config));
  CHECK(parsed.order == config.order);
  CHECK(parsed.beta == config.beta);
  CHECK(parsed.seed == config.seed);
  REQUIRE(parsed.sources.size() == 1);
  CHECK(std::abs(parsed.sources[0].direction.azimuth - 1.0) <= 1e-12);
  CHECK(std::abs(parsed.sources[0].direction.elevation + 0.5) <= 1e-12);
}

TEST_CASE("experiment spec parsing") {
  const ExperimentSpec sweep = parse_experiment_spec(R"({
    "experiment": "sweep",
    "orders": [1, 2, 3],
    "q_values": [1, 2, 4],
    "beta_values": [0.0, 0.5, 1.0],
    "covariance_mode": "analytic"
  })");
  CHECK(sweep.kind == ExperimentKind::sweep);
  CHECK(sweep.sweep.estimators.size() == 3);  // default: all
  CHECK(sweep.sweep.covariance_mode == CovarianceMode::analytic);
  CHECK(sweep.sweep.seeds == 10);

  const ExperimentSpec transition = parse_experiment_spec(R"({
    "experiment": "transition",
    "orders": [1, 3],
    "q_values": [1, 4, 9],
    "samples": 4096,
    "seeds": 5
  })");
  CHECK(transition.kind == ExperimentKind::transition);
  CHECK(transition.sweep.samples == 4096);
}

TEST_CASE("omitted axes fall back to the paper-scale defaults") {
  const ExperimentSpec sweep = parse_experiment_spec(R"({"experiment": "sweep"})");
  CHECK(sweep.sweep.orders == std::vector<int>{1, 2, 3});
  CHECK(sweep.sweep.q_values.size() == 36);
  CHECK(sweep.sweep.q_values.front() == 1);
  CHECK(sweep.sweep.q_values.back() == 36);
  CHECK(sweep.sweep.beta_values.size() == 21);
  CHECK(sweep.sweep.beta_values.front() == 0.0);
  CHECK(sweep.sweep.beta_values.back() == 1.0);
  CHECK(sweep.sweep.samples == 1024);
  CHECK(sweep.sweep.seeds == 10);

  const ExperimentSpec transition = parse_experiment_spec(R"({"experiment": "transition"})");
  CHECK(transition.sweep.orders == std::vector<int>{1, 2, 3, 4});
  CHECK(transition.sweep.q_values.size() == 36);
}

TEST_CASE("experiment spec rejection") {
  CHECK_THROWS_WITH_AS(
      parse_experiment_spec(
          R"({"experiment": "sweep", "orders": [1], "q_values": [], "beta_values": [0]})"),
      doctest::Contains("q_values"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_experiment_spec(
          R"({"experiment": "sweep", "orders": [1], "q_values": [1], "beta_values": [0],
              "estimators": ["pulkki"]})"),
      doctest::Contains("estimators"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_experiment_spec(
          R"({"experiment": "transition", "orders": [1], "q_values": [1], "beta_values": [0]})"),
      doctest::Contains("beta_values"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_experiment_spec(R"({"orders": [1], "q_values": [1]})"),
                       doctest::Contains("experiment"), ConfigError);
}

}  // TEST_SUITE
