#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "starkbus/device.hpp"

namespace starkbus {

struct ScenarioOptions {
  std::filesystem::path output_dir = ".";
  int workers = 0;
  bool full_resolution = false;
  /// Replaces the default device for every point of the scenario.
  std::optional<Device> device;
};

/// One thresholded quantity. Passes when lower <= value <= upper for the
/// bounds that are present; NaN never passes.
struct ScenarioCheck {
  std::string name;
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;

  bool passed() const;
};

struct ScenarioReport {
  std::string name;
  std::vector<std::string> files; // relative to the output directory
  std::vector<ScenarioCheck> checks;

  bool passed() const;
  /// Line-oriented key=value summary.
  std::string summary() const;
};

struct Scenario {
  std::string name;
  std::string description;
  std::string sweep;                 // human-readable sweep spec
  std::vector<std::string> outputs;  // "file: columns"
  std::vector<std::string> thresholds;
  std::function<ScenarioReport(const Device &, const ScenarioOptions &)> run;
};

/// All registered scenarios in a fixed order.
const std::vector<Scenario> &scenario_registry();
/// Throws UnknownScenario.
const Scenario &find_scenario(const std::string &name);

/// Runs the scenario, writes its CSV files and <name>.summary into
/// options.output_dir. Threshold violations are reported, not thrown.
ScenarioReport run_scenario(const std::string &name, const ScenarioOptions &options = {});

struct FeatureCount {
  int count = 0;
  double depth = 0.0; // summed deviation from the neighbour mean
};

/// Dip/peak features of a sampled curve: strict local extrema deviating from
/// the mean of their two neighbours by more than `threshold`. Extrema closer
/// than three samples are merged into one feature.
FeatureCount count_features(const std::vector<double> &values, double threshold);

} // namespace starkbus
