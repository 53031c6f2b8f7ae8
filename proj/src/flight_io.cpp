#include "aerloc/flight_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "aerloc/errors.hpp"
#include "aerloc/image_io.hpp"
#include "aerloc/text_io.hpp"

namespace aerloc {
namespace {

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu.png", index);
  return buf;
}

}  // namespace

std::vector<Pose2D> dead_reckoning(const FlightLog& flight) {
  std::vector<Pose2D> out;
  if (flight.frames.empty()) return out;
  out.reserve(flight.frames.size());
  Pose2D pose = flight.frames.front().truth;
  out.push_back(pose);
  for (std::size_t t = 1; t < flight.frames.size(); ++t) {
    const OdometryDelta& odo = flight.frames[t].odometry;
    const double heading = pose.yaw + odo.d_rot;
    pose = {pose.x + odo.d_tran * std::cos(heading), pose.y + odo.d_tran * std::sin(heading),
            normalize_angle(heading)};
    out.push_back(pose);
  }
  return out;
}

void write_flight(const std::filesystem::path& dir, const FlightLog& flight) {
  std::filesystem::create_directories(dir / "frames");
  std::ofstream truth(dir / "truth.csv");
  std::ofstream odo(dir / "odometry.csv");
  if (!truth || !odo) throw IoError("cannot write flight files in " + dir.string());
  truth << "frame,t_sec,x_m,y_m,yaw_rad,altitude_m\n";
  odo << "frame,d_tran_m,d_rot_rad\n";
  for (std::size_t t = 0; t < flight.frames.size(); ++t) {
    const FlightFrame& f = flight.frames[t];
    truth << t << ',' << format_double(f.t_sec) << ',' << format_double(f.truth.x) << ','
          << format_double(f.truth.y) << ',' << format_double(f.truth.yaw) << ','
          << format_double(f.altitude) << '\n';
    odo << t << ',' << format_double(f.odometry.d_tran) << ','
        << format_double(f.odometry.d_rot) << '\n';
    write_png(dir / "frames" / frame_name(t), f.image);
  }
  write_key_values(dir / "meta.txt",
                   {{"fov_deg", format_double(flight.camera.fov_deg)},
                    {"patch_px", std::to_string(flight.camera.patch_px)},
                    {"frame_rate_hz", format_double(flight.frame_rate_hz)},
                    {"map", flight.map_ref}});
}

FlightLog read_flight(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("flight directory not found: " + dir.string());
  }
  const KeyValues meta = read_key_values(dir / "meta.txt");
  FlightLog flight;
  flight.camera.fov_deg = require_number(meta, "fov_deg");
  flight.camera.patch_px = static_cast<int>(parse_u64(require_string(meta, "patch_px")));
  flight.frame_rate_hz = require_number(meta, "frame_rate_hz");
  if (const auto it = meta.find("map"); it != meta.end()) flight.map_ref = it->second;

  const CsvTable truth = read_csv(dir / "truth.csv");
  const CsvTable odo = read_csv(dir / "odometry.csv");
  if (truth.rows.size() != odo.rows.size()) {
    throw IoError("truth.csv and odometry.csv disagree on frame count in " + dir.string());
  }
  const std::size_t c_t = truth.column("t_sec"), c_x = truth.column("x_m"),
                    c_y = truth.column("y_m"), c_yaw = truth.column("yaw_rad"),
                    c_alt = truth.column("altitude_m"), c_tf = truth.column("frame");
  const std::size_t c_tran = odo.column("d_tran_m"), c_rot = odo.column("d_rot_rad"),
                    c_of = odo.column("frame");
  flight.frames.resize(truth.rows.size());
  for (std::size_t t = 0; t < truth.rows.size(); ++t) {
    const auto& tr = truth.rows[t];
    const auto& od = odo.rows[t];
    if (parse_u64(tr[c_tf]) != t || parse_u64(od[c_of]) != t) {
      throw IoError("flight CSV rows must list frames 0..N-1 in order");
    }
    FlightFrame& f = flight.frames[t];
    f.t_sec = parse_double(tr[c_t]);
    f.truth = {parse_double(tr[c_x]), parse_double(tr[c_y]), parse_double(tr[c_yaw])};
    f.altitude = parse_double(tr[c_alt]);
    f.odometry = {parse_double(od[c_tran]), parse_double(od[c_rot])};
    f.image = read_gray_image(dir / "frames" / frame_name(t));
  }
  return flight;
}

std::filesystem::path flight_map_path(const std::filesystem::path& dir,
                                      const FlightLog& flight) {
  if (flight.map_ref.empty()) return {};
  const std::filesystem::path ref(flight.map_ref);
  return ref.is_absolute() ? ref : dir / ref;
}

}  // namespace aerloc
