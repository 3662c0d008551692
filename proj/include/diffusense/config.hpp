#pragma once

#include <stdexcept>
#include <string>

#include "diffusense/experiments.hpp"
#include "diffusense/field.hpp"

namespace diffusense {

/// Malformed or invalid configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario document (JSON object, unknown keys rejected):
///   order         int >= 0                           (required)
///   beta          number in [0, 1]                   (default 0)
///   samples       int >= 1                           (default 1024)
///   seed          unsigned int                       (default 0)
///   correlation   "uncorrelated" | "identical"       (default "uncorrelated")
///   ignore_sources bool                              (default false)
///   sources       list of {azimuth_deg, elevation_deg, power} (default [])
ScenarioConfig parse_scenario_config(const std::string& text);
std::string scenario_config_to_json(const ScenarioConfig& config);

enum class ExperimentKind { sweep, transition };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::sweep;
  SweepSpec sweep;  // transition runs reuse orders/q_values/samples/seeds/seed_base
};

/// Sweep document (JSON object, unknown keys rejected):
///   experiment      "sweep" | "transition"           (required)
///   estimators      list of estimator names          (sweep only; default all)
///   orders          list of int >= 1                 (required)
///   q_values        list of int >= 1                 (required)
///   beta_values     list of numbers in [0, 1]        (sweep only; required)
///   correlation     as in scenarios                  (sweep only; default "uncorrelated")
///   covariance_mode "empirical" | "analytic"         (sweep only; default "empirical")
///   samples         int >= 1                         (default 1024)
///   seeds           int >= 1                         (default 10)
///   seed_base       unsigned int                     (default 0)
ExperimentSpec parse_experiment_spec(const std::string& text);

}  // namespace diffusense
