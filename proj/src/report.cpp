#include "aerloc/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "aerloc/errors.hpp"
#include "aerloc/text_io.hpp"

namespace aerloc {
namespace {

constexpr const char* kReportHeader =
    "frame,gt_x_m,gt_y_m,gt_yaw_rad,est_x_m,est_y_m,est_yaw_rad,error_m,"
    "n_evaluated,k_bins,degenerate,dr_x_m,dr_y_m,dr_yaw_rad,dr_error_m";

}  // namespace

double position_error(const Pose2D& a, const Pose2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

RunSummary RunReport::summary() const {
  RunSummary s;
  s.frames = rows.size();
  if (rows.empty()) return s;
  for (const auto& row : rows) {
    s.mean_error_m += row.error_m;
    s.mean_evaluations += static_cast<double>(row.n_evaluated);
    s.mean_dr_error_m += row.dr_error_m;
    s.degenerate_frames += row.degenerate ? 1 : 0;
  }
  const double n = static_cast<double>(rows.size());
  s.mean_error_m /= n;
  s.mean_evaluations /= n;
  s.mean_dr_error_m /= n;
  return s;
}

void write_report_csv(const std::filesystem::path& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << "# seed=" << report.seed << " conversion=" << report.conversion << '\n';
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.frame << ',' << format_double(r.truth.x) << ',' << format_double(r.truth.y)
        << ',' << format_double(r.truth.yaw) << ',' << format_double(r.estimate.x) << ','
        << format_double(r.estimate.y) << ',' << format_double(r.estimate.yaw) << ','
        << format_double(r.error_m) << ',' << r.n_evaluated << ',' << r.k_bins << ','
        << (r.degenerate ? 1 : 0) << ',' << format_double(r.dead_reckoning.x) << ','
        << format_double(r.dead_reckoning.y) << ',' << format_double(r.dead_reckoning.yaw)
        << ',' << format_double(r.dr_error_m) << '\n';
  }
}

RunReport read_report_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  RunReport report;
  for (const auto& comment : table.comments) {
    std::istringstream tokens(comment);
    std::string kv;
    while (tokens >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq);
      if (key == "seed") report.seed = parse_u64(kv.substr(eq + 1));
      if (key == "conversion") report.conversion = kv.substr(eq + 1);
    }
  }
  const auto col = [&table](const char* name) { return table.column(name); };
  const std::size_t c_frame = col("frame"), c_gx = col("gt_x_m"), c_gy = col("gt_y_m"),
                    c_gyaw = col("gt_yaw_rad"), c_ex = col("est_x_m"),
                    c_ey = col("est_y_m"), c_eyaw = col("est_yaw_rad"),
                    c_err = col("error_m"), c_n = col("n_evaluated"),
                    c_k = col("k_bins"), c_deg = col("degenerate"), c_dx = col("dr_x_m"),
                    c_dy = col("dr_y_m"), c_dyaw = col("dr_yaw_rad"),
                    c_derr = col("dr_error_m");
  for (const auto& cells : table.rows) {
    ReportRow r;
    r.frame = parse_u64(cells[c_frame]);
    r.truth = {parse_double(cells[c_gx]), parse_double(cells[c_gy]),
               parse_double(cells[c_gyaw])};
    r.estimate = {parse_double(cells[c_ex]), parse_double(cells[c_ey]),
                  parse_double(cells[c_eyaw])};
    r.error_m = parse_double(cells[c_err]);
    r.n_evaluated = parse_u64(cells[c_n]);
    r.k_bins = parse_u64(cells[c_k]);
    r.degenerate = parse_u64(cells[c_deg]) != 0;
    r.dead_reckoning = {parse_double(cells[c_dx]), parse_double(cells[c_dy]),
                        parse_double(cells[c_dyaw])};
    r.dr_error_m = parse_double(cells[c_derr]);
    report.rows.push_back(r);
  }
  return report;
}

void write_summary(const std::filesystem::path& path, const RunReport& report) {
  const RunSummary s = report.summary();
  write_key_values(path, {{"seed", std::to_string(report.seed)},
                          {"conversion", report.conversion},
                          {"frames", std::to_string(s.frames)},
                          {"mean_error_m", format_double(s.mean_error_m)},
                          {"mean_evaluations", format_double(s.mean_evaluations)},
                          {"mean_dr_error_m", format_double(s.mean_dr_error_m)},
                          {"degenerate_frames", std::to_string(s.degenerate_frames)}});
}

RunSummary read_summary(const std::filesystem::path& path) {
  const KeyValues kv = read_key_values(path);
  RunSummary s;
  s.frames = parse_u64(require_string(kv, "frames"));
  s.mean_error_m = require_number(kv, "mean_error_m");
  s.mean_evaluations = require_number(kv, "mean_evaluations");
  s.mean_dr_error_m = require_number(kv, "mean_dr_error_m");
  s.degenerate_frames = parse_u64(require_string(kv, "degenerate_frames"));
  return s;
}

}  // namespace aerloc
