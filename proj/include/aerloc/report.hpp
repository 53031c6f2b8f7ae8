#ifndef AERLOC_REPORT_HPP_
#define AERLOC_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aerloc/raster_map.hpp"

namespace aerloc {

struct ReportRow {
  std::size_t frame = 0;
  Pose2D truth;
  Pose2D estimate;
  double error_m = 0.0;
  std::size_t n_evaluated = 0;
  std::size_t k_bins = 0;
  bool degenerate = false;
  /// Odometry-only baseline pose and its error against truth.
  Pose2D dead_reckoning;
  double dr_error_m = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct RunSummary {
  std::size_t frames = 0;
  double mean_error_m = 0.0;
  double mean_evaluations = 0.0;
  double mean_dr_error_m = 0.0;
  std::size_t degenerate_frames = 0;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::string conversion;
  std::vector<ReportRow> rows;

  RunSummary summary() const;
};

/// Euclidean distance between pose positions.
double position_error(const Pose2D& a, const Pose2D& b);

/// Per-frame CSV; the first line is a `# seed=... conversion=...` ledger.
void write_report_csv(const std::filesystem::path& path, const RunReport& report);
RunReport read_report_csv(const std::filesystem::path& path);

void write_summary(const std::filesystem::path& path, const RunReport& report);
RunSummary read_summary(const std::filesystem::path& path);

}  // namespace aerloc

#endif  // AERLOC_REPORT_HPP_
