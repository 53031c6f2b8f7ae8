#ifndef AERLOC_CONFIG_HPP_
#define AERLOC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aerloc/filter.hpp"
#include "aerloc/likelihood.hpp"
#include "aerloc/sim.hpp"

namespace aerloc {

/// Everything the command-line tool can be configured with. Paths are
/// resolved against the directory of the JSON file they came from.
struct AppConfig {
  std::uint64_t seed = 1;
  std::filesystem::path map;
  std::filesystem::path flight;

  ConversionSpec conversion;
  FilterConfig filter;

  WorldSpec world;
  FlightPlan plan;
  /// When false the path is centered on the map.
  bool has_start = false;
  double sensor_noise_sigma = 25.0;  // gray levels per pixel
  double odometry_drift = 0.02;
  OdometryNoise odometry_noise;

  std::size_t repetitions = 10;
  std::vector<std::string> scenarios;
  /// Empty means the command's own default list.
  std::vector<ConversionSpec> conversions;
  std::vector<double> age_levels;

  /// Inputs of the rank, compare and report commands.
  std::filesystem::path sweep_csv;
  std::filesystem::path summary_a;
  std::filesystem::path summary_b;
  std::filesystem::path results_dir;
};

/// Parses a JSON document. Unknown keys, wrong types and invalid values
/// throw ConfigError.
AppConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace aerloc

#endif  // AERLOC_CONFIG_HPP_
