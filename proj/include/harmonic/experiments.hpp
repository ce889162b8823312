#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace harmonic {

/// One experiment run. Unset optionals take per-experiment defaults.
struct ExperimentConfig {
  std::string experiment;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 20261018;
  std::optional<std::string> theta;        // catalog name
  std::optional<double> alpha;             // with slow_factor, instead of theta
  std::optional<std::string> slow_factor;  // constant | log1p | inverse-log
  /// Overrides of the default tolerances. A key ending in "_min" is a lower
  /// bound on the metric named without the suffix; any other key is an
  /// upper bound on the metric of the same name.
  std::map<std::string, double> tolerances;
  std::string output_path;
  std::string prime_cache;
  unsigned workers = 0;
};

/// Parses the flat JSON config; unknown keys and bad values throw
/// ConfigError naming the field.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

struct ExperimentReport {
  ExperimentConfig config;  // with defaults filled in
  std::map<std::string, double> metrics;
  std::map<std::string, double> tolerances;
  std::map<std::string, bool> pass;
  std::vector<std::string> notes;
  /// CSV side outputs by artifact name, written next to the JSON report.
  std::map<std::string, std::string> artifacts;
  double wall_time = 0.0;
  std::string library_version;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Writes the JSON report to `path` and each artifact to `<path>.<name>.csv`.
void write_report(const ExperimentReport& report, const std::filesystem::path& path);

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string covers;  // what part of the model the run checks
};

const std::vector<ExperimentInfo>& list_experiments();

/// Deterministic in (config, seed) for a given build, independent of the
/// worker count. Throws ConfigError for invalid configs.
ExperimentReport run(const ExperimentConfig& config);

/// Uniform sampling contrast: (omega(J_n) - log log n) / sqrt(log log n)
/// against the standard normal.
ExperimentReport erdos_kac_contrast(std::uint64_t n, std::uint64_t samples, std::uint64_t seed);

std::string library_version();

}  // namespace harmonic
