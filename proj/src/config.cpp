#include "aerloc/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "aerloc/errors.hpp"

namespace aerloc {
namespace {

using nlohmann::json;
using Handler = std::function<void(const json&)>;

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

void dispatch(const json& obj, const std::string& where,
              const std::map<std::string, Handler>& handlers) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("unknown config key '" + where + key + "'");
    it->second(value);
  }
}

template <typename T>
Handler set_number(T& target, const std::string& key) {
  return [&target, key](const json& v) { target = static_cast<T>(as_number(v, key)); };
}

template <typename T>
Handler set_count(T& target, const std::string& key) {
  return [&target, key](const json& v) { target = static_cast<T>(as_count(v, key)); };
}

Handler set_path(std::filesystem::path& target, const std::filesystem::path& base,
                 const std::string& key) {
  return [&target, base, key](const json& v) {
    const std::filesystem::path p(as_string(v, key));
    target = p.is_absolute() ? p : base / p;
  };
}

double default_param(const std::string& kind) { return kind == "logistic" ? 0.2 : 0.0; }

}  // namespace

AppConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  AppConfig cfg;
  std::optional<std::string> conversion_kind;
  std::optional<double> conversion_param;
  std::optional<double> start_x, start_y, start_yaw;
  auto& noise = cfg.filter.noise;
  auto& kld = cfg.filter.kld;
  auto& world = cfg.world;
  auto& plan = cfg.plan;

  const std::map<std::string, Handler> world_keys = {
      {"size_px", set_count(world.size_px, "world.size_px")},
      {"gsd_m_per_px", set_number(world.gsd, "world.gsd_m_per_px")},
      {"terrain", [&](const json& v) { world.terrain = parse_terrain(as_string(v, "world.terrain")); }},
      {"octaves", set_count(world.octaves, "world.octaves")},
      {"roughness", set_number(world.roughness, "world.roughness")},
      {"base_period_px", set_count(world.base_period_px, "world.base_period_px")},
  };
  const std::map<std::string, Handler> plan_keys = {
      {"shape", [&](const json& v) { plan.shape = parse_shape(as_string(v, "flight_plan.shape")); }},
      {"altitude_m", set_number(plan.altitude, "flight_plan.altitude_m")},
      {"speed_mps", set_number(plan.speed, "flight_plan.speed_mps")},
      {"frame_rate_hz", set_number(plan.frame_rate, "flight_plan.frame_rate_hz")},
      {"start_x_m", [&](const json& v) { start_x = as_number(v, "flight_plan.start_x_m"); }},
      {"start_y_m", [&](const json& v) { start_y = as_number(v, "flight_plan.start_y_m"); }},
      {"start_yaw_rad", [&](const json& v) { start_yaw = as_number(v, "flight_plan.start_yaw_rad"); }},
      {"length_m", set_number(plan.length, "flight_plan.length_m")},
      {"width_m", set_number(plan.width, "flight_plan.width_m")},
      {"radius_m", set_number(plan.radius, "flight_plan.radius_m")},
  };
  const std::map<std::string, Handler> camera_keys = {
      {"fov_deg", set_number(plan.camera.fov_deg, "camera.fov_deg")},
      {"patch_px", set_count(plan.camera.patch_px, "camera.patch_px")},
  };

  const std::map<std::string, Handler> top = {
      {"seed", set_count(cfg.seed, "seed")},
      {"map", set_path(cfg.map, base_dir, "map")},
      {"flight", set_path(cfg.flight, base_dir, "flight")},
      {"conversion", [&](const json& v) { conversion_kind = as_string(v, "conversion"); }},
      {"conversion_param", [&](const json& v) { conversion_param = as_number(v, "conversion_param"); }},
      {"alpha1", set_number(noise.alpha1, "alpha1")},
      {"alpha2", set_number(noise.alpha2, "alpha2")},
      {"alpha3", set_number(noise.alpha3, "alpha3")},
      {"eps_tran_scale", set_number(noise.eps_tran_scale, "eps_tran_scale")},
      {"eps_tran_min", set_number(noise.eps_tran_min, "eps_tran_min")},
      {"eps_rot", set_number(noise.eps_rot, "eps_rot")},
      {"kld_epsilon", set_number(kld.epsilon, "kld_epsilon")},
      {"kld_delta", set_number(kld.delta, "kld_delta")},
      {"bin_size_m", set_number(kld.bin_size, "bin_size_m")},
      {"n_min", set_count(kld.n_min, "n_min")},
      {"n_max", set_count(kld.n_max, "n_max")},
      {"init_radius_m", set_number(cfg.filter.init_radius, "init_radius_m")},
      {"init_particles", set_count(cfg.filter.init_particles, "init_particles")},
      {"eps_rot_init", set_number(cfg.filter.eps_rot_init, "eps_rot_init")},
      {"batch_size", set_count(cfg.filter.batch_size, "batch_size")},
      {"heading", [&](const json& v) {
         const std::string h = as_string(v, "heading");
         if (h == "circular") {
           cfg.filter.heading = HeadingFusion::circular;
         } else if (h == "weighted_sum") {
           cfg.filter.heading = HeadingFusion::weighted_sum;
         } else {
           throw ConfigError("heading must be 'circular' or 'weighted_sum'");
         }
       }},
      {"world", [&](const json& v) { dispatch(v, "world.", world_keys); }},
      {"flight_plan", [&](const json& v) { dispatch(v, "flight_plan.", plan_keys); }},
      {"camera", [&](const json& v) { dispatch(v, "camera.", camera_keys); }},
      {"sensor_noise_sigma", set_number(cfg.sensor_noise_sigma, "sensor_noise_sigma")},
      {"odometry_drift", set_number(cfg.odometry_drift, "odometry_drift")},
      {"odometry_sigma_tran", set_number(cfg.odometry_noise.sigma_tran, "odometry_sigma_tran")},
      {"odometry_sigma_rot", set_number(cfg.odometry_noise.sigma_rot, "odometry_sigma_rot")},
      {"repetitions", set_count(cfg.repetitions, "repetitions")},
      {"scenarios", [&](const json& v) {
         if (!v.is_array()) throw ConfigError("config key 'scenarios' must be an array");
         for (const auto& s : v) cfg.scenarios.push_back(as_string(s, "scenarios[]"));
       }},
      {"conversions", [&](const json& v) {
         if (!v.is_array()) throw ConfigError("config key 'conversions' must be an array");
         for (const auto& s : v) {
           cfg.conversions.push_back(ConversionSpec::parse_label(as_string(s, "conversions[]")));
         }
       }},
      {"age_levels", [&](const json& v) {
         if (!v.is_array()) throw ConfigError("config key 'age_levels' must be an array");
         for (const auto& s : v) cfg.age_levels.push_back(as_number(s, "age_levels[]"));
       }},
      {"sweep", set_path(cfg.sweep_csv, base_dir, "sweep")},
      {"summary_a", set_path(cfg.summary_a, base_dir, "summary_a")},
      {"summary_b", set_path(cfg.summary_b, base_dir, "summary_b")},
      {"results", set_path(cfg.results_dir, base_dir, "results")},
  };

  try {
    dispatch(doc, "", top);
    if (conversion_kind) {
      if (conversion_kind->find(':') != std::string::npos) {
        if (conversion_param) {
          throw ConfigError("give the conversion parameter either in the label or in conversion_param");
        }
        cfg.conversion = ConversionSpec::parse_label(*conversion_kind);
      } else {
        cfg.conversion = ConversionSpec::parse(
            *conversion_kind, conversion_param.value_or(default_param(*conversion_kind)));
      }
    } else if (conversion_param) {
      cfg.conversion.param = *conversion_param;
    }
    if (start_x || start_y || start_yaw) {
      if (!start_x || !start_y) {
        throw ConfigError("flight_plan needs both start_x_m and start_y_m");
      }
      cfg.plan.start = {*start_x, *start_y, start_yaw.value_or(0.0)};
      cfg.has_start = true;
    }
    cfg.conversion.validate();
    cfg.filter.validate();
    cfg.world.validate();
    cfg.plan.validate();
    for (const auto& c : cfg.conversions) c.validate();
    for (const double level : cfg.age_levels) {
      if (!(level >= 0.0 && level <= 1.0)) throw ConfigError("age_levels must lie in [0, 1]");
    }
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (cfg.sensor_noise_sigma < 0.0) throw ConfigError("sensor_noise_sigma must be >= 0");
    if (cfg.odometry_noise.sigma_tran < 0.0 || cfg.odometry_noise.sigma_rot < 0.0) {
      throw ConfigError("odometry sigmas must be >= 0");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace aerloc
