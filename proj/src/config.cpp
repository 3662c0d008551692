#include "diffusense/config.hpp"

#include <nlohmann/json.hpp>

#include <numbers>
#include <set>

namespace diffusense {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

json parse_object(const std::string& text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(std::string(what) + ": document must be a JSON object");
  return doc;
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& known, const char* what) {
  for (const auto& [key, value] : doc.items())
    if (!known.count(key))
      throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
}

template <typename T>
T field_as(const json& doc, const std::string& key, const char* expected) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' must be " + expected);
  }
}

Correlation parse_correlation(const json& doc) {
  const auto name = field_as<std::string>(doc, "correlation", "a string");
  if (name == "uncorrelated") return Correlation::uncorrelated;
  if (name == "identical") return Correlation::identical;
  throw ConfigError("field 'correlation' must be \"uncorrelated\" or \"identical\"");
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text) {
  const json doc = parse_object(text, "scenario config");
  reject_unknown_keys(
      doc, {"order", "beta", "samples", "seed", "correlation", "ignore_sources", "sources"},
      "scenario config");

  ScenarioConfig config;
  if (!doc.contains("order")) throw ConfigError("field 'order' is required");
  config.order = field_as<int>(doc, "order", "an integer");
  if (config.order < 0) throw ConfigError("field 'order' must be >= 0");
  if (doc.contains("beta")) {
    config.beta = field_as<double>(doc, "beta", "a number");
    if (!(config.beta >= 0.0 && config.beta <= 1.0))
      throw ConfigError("field 'beta' must lie in [0, 1]");
  }
  if (doc.contains("samples")) {
    config.samples = field_as<std::int64_t>(doc, "samples", "an integer");
    if (config.samples < 1) throw ConfigError("field 'samples' must be >= 1");
  }
  if (doc.contains("seed")) config.seed = field_as<std::uint64_t>(doc, "seed", "an unsigned integer");
  if (doc.contains("correlation")) config.correlation = parse_correlation(doc);
  if (doc.contains("ignore_sources"))
    config.ignore_sources = field_as<bool>(doc, "ignore_sources", "a boolean");
  if (doc.contains("sources")) {
    const json& sources = doc.at("sources");
    if (!sources.is_array()) throw ConfigError("field 'sources' must be a list");
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const json& entry = sources[i];
      const std::string where = "sources[" + std::to_string(i) + "]";
      if (!entry.is_object()) throw ConfigError(where + " must be an object");
      reject_unknown_keys(entry, {"azimuth_deg", "elevation_deg", "power"}, where.c_str());
      SourceSpec src;
      double azimuth = 0.0, elevation = 0.0;
      if (entry.contains("azimuth_deg"))
        azimuth = field_as<double>(entry, "azimuth_deg", "a number");
      if (entry.contains("elevation_deg")) {
        elevation = field_as<double>(entry, "elevation_deg", "a number");
        if (elevation < -90.0 || elevation > 90.0)
          throw ConfigError(where + ".elevation_deg must lie in [-90, 90]");
      }
      src.direction = Direction(azimuth * kDegToRad, elevation * kDegToRad);
      if (entry.contains("power")) {
        src.power = field_as<double>(entry, "power", "a number");
        if (!(src.power > 0.0)) throw ConfigError(where + ".power must be > 0");
      }
      config.sources.push_back(src);
    }
  }

  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

std::string scenario_config_to_json(const ScenarioConfig& config) {
  json doc;
  doc["order"] = config.order;
  doc["beta"] = config.beta;
  doc["samples"] = config.samples;
  doc["seed"] = config.seed;
  doc["correlation"] =
      config.correlation == Correlation::uncorrelated ? "uncorrelated" : "identical";
  doc["ignore_sources"] = config.ignore_sources;
  doc["sources"] = json::array();
  for (const auto& src : config.sources)
    doc["sources"].push_back({{"azimuth_deg", src.direction.azimuth / kDegToRad},
                              {"elevation_deg", src.direction.elevation / kDegToRad},
                              {"power", src.power}});
  return doc.dump(2) + "\n";
}

ExperimentSpec parse_experiment_spec(const std::string& text) {
  const json doc = parse_object(text, "experiment spec");
  reject_unknown_keys(doc,
                      {"experiment", "estimators", "orders", "q_values", "beta_values",
                       "correlation", "covariance_mode", "samples", "seeds", "seed_base"},
                      "experiment spec");

  ExperimentSpec spec;
  if (!doc.contains("experiment")) throw ConfigError("field 'experiment' is required");
  const auto kind = field_as<std::string>(doc, "experiment", "a string");
  if (kind == "sweep")
    spec.kind = ExperimentKind::sweep;
  else if (kind == "transition")
    spec.kind = ExperimentKind::transition;
  else
    throw ConfigError("field 'experiment' must be \"sweep\" or \"transition\"");

  auto int_list = [&doc](const std::string& key) {
    auto values = field_as<std::vector<int>>(doc, key, "a list of integers");
    if (values.empty()) throw ConfigError("field '" + key + "' must be non-empty");
    for (int v : values)
      if (v < 1) throw ConfigError("field '" + key + "' entries must be >= 1");
    return values;
  };

  // omitted axes fall back to the paper-scale defaults
  const SweepSpec defaults = default_sweep_spec();
  const auto transition_defaults = default_transition_axes();
  if (doc.contains("orders"))
    spec.sweep.orders = int_list("orders");
  else
    spec.sweep.orders =
        spec.kind == ExperimentKind::sweep ? defaults.orders : transition_defaults.first;
  if (doc.contains("q_values"))
    spec.sweep.q_values = int_list("q_values");
  else
    spec.sweep.q_values = defaults.q_values;

  if (doc.contains("samples")) {
    spec.sweep.samples = field_as<std::int64_t>(doc, "samples", "an integer");
    if (spec.sweep.samples < 1) throw ConfigError("field 'samples' must be >= 1");
  }
  if (doc.contains("seeds")) {
    spec.sweep.seeds = field_as<int>(doc, "seeds", "an integer");
    if (spec.sweep.seeds < 1) throw ConfigError("field 'seeds' must be >= 1");
  }
  if (doc.contains("seed_base"))
    spec.sweep.seed_base = field_as<std::uint64_t>(doc, "seed_base", "an unsigned integer");

  if (spec.kind == ExperimentKind::sweep) {
    if (doc.contains("estimators")) {
      const auto names = field_as<std::vector<std::string>>(doc, "estimators", "a list of strings");
      if (names.empty()) throw ConfigError("field 'estimators' must be non-empty");
      for (const auto& name : names) {
        try {
          spec.sweep.estimators.push_back(estimator_from_string(name));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("field 'estimators': ") + e.what());
        }
      }
    } else {
      spec.sweep.estimators = {Estimator::comedie, Estimator::dirac, Estimator::thiele_gover};
    }
    if (doc.contains("beta_values")) {
      spec.sweep.beta_values =
          field_as<std::vector<double>>(doc, "beta_values", "a list of numbers");
      if (spec.sweep.beta_values.empty())
        throw ConfigError("field 'beta_values' must be non-empty");
      for (double beta : spec.sweep.beta_values)
        if (!(beta >= 0.0 && beta <= 1.0))
          throw ConfigError("field 'beta_values' entries must lie in [0, 1]");
    } else {
      spec.sweep.beta_values = defaults.beta_values;
    }
    if (doc.contains("correlation")) spec.sweep.correlation = parse_correlation(doc);
    if (doc.contains("covariance_mode")) {
      const auto mode = field_as<std::string>(doc, "covariance_mode", "a string");
      if (mode == "empirical")
        spec.sweep.covariance_mode = CovarianceMode::empirical;
      else if (mode == "analytic")
        spec.sweep.covariance_mode = CovarianceMode::analytic;
      else
        throw ConfigError("field 'covariance_mode' must be \"empirical\" or \"analytic\"");
    }
  } else {
    for (const char* key : {"estimators", "beta_values", "correlation", "covariance_mode"})
      if (doc.contains(key))
        throw ConfigError("field '" + std::string(key) + "' does not apply to transition runs");
  }

  return spec;
}

}  // namespace diffusense
