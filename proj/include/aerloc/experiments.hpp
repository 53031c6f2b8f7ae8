#ifndef AERLOC_EXPERIMENTS_HPP_
#define AERLOC_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aerloc/filter.hpp"
#include "aerloc/likelihood.hpp"
#include "aerloc/report.hpp"
#include "aerloc/sim.hpp"

namespace aerloc {

/// Synthetic scenario named like "FL-200": terrain letter (F fractal,
/// U urban blocks), shape letter (L line, C circle, R rectangle), altitude.
struct Scenario {
  std::string name;
  TerrainKind terrain = TerrainKind::fractal;
  FlightShape shape = FlightShape::line;
  double altitude = 200.0;

  static Scenario parse(std::string_view name);
};

/// Shared settings for every repetition of an experiment.
struct ExperimentSetup {
  std::uint64_t base_seed = 1;
  std::size_t repetitions = 10;
  WorldSpec world;       // terrain and seed are overridden per run
  FlightPlan plan;       // shape, altitude and start are overridden per run
  double sensor_noise_sigma = 25.0;  // gray levels per pixel
  double odometry_drift = 0.02;
  OdometryNoise odometry_noise;
  FilterConfig filter;
  /// Concurrent runs; 1 keeps the run loop serial and parallelizes inside
  /// each run instead.
  int jobs = 1;
};

/// Seeds of one repetition. They depend only on the base seed, scenario name
/// and repetition index, so cells are paired across conversions and stay
/// unchanged when other scenarios are added.
struct RepetitionSeeds {
  std::uint64_t world = 0;
  std::uint64_t flight = 0;
  std::uint64_t filter = 0;
  std::uint64_t age = 0;
};
RepetitionSeeds repetition_seeds(std::uint64_t base_seed, std::string_view scenario,
                                 std::size_t rep);

/// One filter run inside a sweep or robustness experiment.
struct RunRecord {
  std::string scenario;
  double age_level = 0.0;
  std::string conversion;
  std::size_t rep = 0;
  RepetitionSeeds seeds;
  bool ok = false;
  RunSummary summary;
  std::string error;
};

/// Aggregate over the repetitions of one (scenario, age level, conversion).
struct CellResult {
  std::string scenario;
  double age_level = 0.0;
  std::string conversion;
  std::size_t repetitions = 0;
  std::size_t completed = 0;
  bool valid = false;  // false when every run failed
  double mean_error_m = 0.0;
  double mean_evaluations = 0.0;
  double mean_dr_error_m = 0.0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<RunRecord> runs;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (scenario, level, conversion, repetition). Frames always come
/// from the level-0 map; level > 0 matches against an aged copy. A failing
/// run is recorded and does not abort the experiment.
ExperimentResult run_experiment(const ExperimentSetup& setup,
                                const std::vector<std::string>& scenarios,
                                const std::vector<ConversionSpec>& conversions,
                                const std::vector<double>& age_levels,
                                const ProgressFn& progress = {});

/// Sweep without map aging.
ExperimentResult run_sweep(const ExperimentSetup& setup,
                           const std::vector<std::string>& scenarios,
                           const std::vector<ConversionSpec>& conversions,
                           const ProgressFn& progress = {});

std::vector<ConversionSpec> default_sweep_conversions();
std::vector<ConversionSpec> default_robustness_conversions();
std::vector<std::string> default_scenarios();
std::vector<double> default_age_levels();

void write_cells_csv(const std::filesystem::path& path, std::uint64_t base_seed,
                     const std::vector<CellResult>& cells);
std::vector<CellResult> read_cells_csv(const std::filesystem::path& path);
void write_runs_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs);
std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path);

struct RankEntry {
  std::string conversion;
  double points = 0.0;
  std::size_t position = 0;  // 1 = lowest total
};

/// Per scenario (and age level), configurations sorted by mean error get
/// points 1..m, ties sharing the mean of their positions; invalid cells share
/// the positions after every valid one. Totals are summed over scenarios and
/// sorted ascending.
std::vector<RankEntry> rank_cells(const std::vector<CellResult>& cells);
void write_ranking_csv(const std::filesystem::path& path, const std::vector<RankEntry>& ranks);

struct Comparison {
  /// (b - a) / a * 100; empty when a's mean error is zero.
  std::optional<double> delta_accuracy_pct;
  /// evaluations_b / evaluations_a; empty when a's evaluations are zero.
  std::optional<double> speedup;
};
Comparison compare_summaries(const RunSummary& a, const RunSummary& b);

}  // namespace aerloc

#endif  // AERLOC_EXPERIMENTS_HPP_
