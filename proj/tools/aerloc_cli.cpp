#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aerloc/config.hpp"
#include "aerloc/errors.hpp"
#include "aerloc/experiments.hpp"
#include "aerloc/filter.hpp"
#include "aerloc/flight_io.hpp"
#include "aerloc/image_io.hpp"
#include "aerloc/report.hpp"
#include "aerloc/sim.hpp"
#include "aerloc/svg_chart.hpp"
#include "aerloc/text_io.hpp"

namespace fs = std::filesystem;
using namespace aerloc;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int jobs = 1;
  bool quiet = false;
};

AppConfig resolve(const Globals& g) {
  AppConfig cfg = g.config.empty() ? AppConfig{} : load_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.jobs < 1) throw ConfigError("--jobs must be >= 1");
  return cfg;
}

fs::path out_dir(const Globals& g) {
  fs::create_directories(g.out);
  return g.out;
}

void require_file(const fs::path& p, const std::string& what) {
  if (p.empty()) throw ConfigError(what + " is not configured");
  if (!fs::exists(p)) throw ConfigError(what + " not found: " + p.string());
}

void say(const Globals& g, const std::string& text) {
  if (!g.quiet) std::cout << text << '\n';
}

ProgressFn progress_printer(const Globals& g) {
  if (g.quiet) return {};
  return [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\r%zu/%zu runs", done, total);
    if (done == total) std::fprintf(stderr, "\n");
  };
}

ExperimentSetup make_setup(const AppConfig& cfg, const Globals& g) {
  ExperimentSetup s;
  s.base_seed = cfg.seed;
  s.repetitions = cfg.repetitions;
  s.world = cfg.world;
  s.plan = cfg.plan;
  s.sensor_noise_sigma = cfg.sensor_noise_sigma;
  s.odometry_drift = cfg.odometry_drift;
  s.odometry_noise = cfg.odometry_noise;
  s.filter = cfg.filter;
  s.jobs = g.jobs;
  return s;
}

void cmd_gen_world(const Globals& g) {
  const AppConfig cfg = resolve(g);
  WorldSpec spec = cfg.world;
  spec.seed = cfg.seed;
  const fs::path path = out_dir(g) / "world.png";
  save_map(path, generate_world(spec));
  say(g, "wrote " + path.string());
}

void cmd_gen_flight(const Globals& g) {
  const AppConfig cfg = resolve(g);
  require_file(cfg.map, "map");
  const RasterMap map = load_map(cfg.map);
  FlightPlan plan = cfg.plan;
  if (!cfg.has_start) plan.start = centered_start(plan, map);
  FlightLog flight;
  try {
    flight = simulate_flight(map, plan, cfg.sensor_noise_sigma, cfg.odometry_drift,
                             cfg.odometry_noise, cfg.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = out_dir(g);
  flight.map_ref = fs::proximate(fs::absolute(cfg.map), fs::absolute(dir)).generic_string();
  write_flight(dir, flight);
  say(g, "wrote " + std::to_string(flight.frames.size()) + " frames to " + dir.string());
}

void cmd_run(const Globals& g) {
  const AppConfig cfg = resolve(g);
  require_file(cfg.flight, "flight directory");
  const FlightLog flight = read_flight(cfg.flight);
  const fs::path map_path = cfg.map.empty() ? flight_map_path(cfg.flight, flight) : cfg.map;
  require_file(map_path, "map");
  const RasterMap map = load_map(map_path);
  FilterConfig filter = cfg.filter;
  const RunReport report = run_flight(flight, map, cfg.conversion, filter, cfg.seed);
  const fs::path dir = out_dir(g);
  write_report_csv(dir / "report.csv", report);
  write_summary(dir / "summary.txt", report);
  const RunSummary s = report.summary();
  say(g, "frames " + std::to_string(s.frames) + "  mean error " + format_double(s.mean_error_m) +
             " m  dead reckoning " + format_double(s.mean_dr_error_m) + " m  evaluations " +
             format_double(s.mean_evaluations));
}

void print_cells(const Globals& g, const std::vector<CellResult>& cells) {
  if (g.quiet) return;
  std::printf("%-8s %-6s %-18s %12s %12s %8s\n", "scenario", "age", "conversion", "error_m",
              "evaluations", "runs");
  for (const auto& c : cells) {
    std::printf("%-8s %-6g %-18s %12.3f %12.1f %4zu/%zu%s\n", c.scenario.c_str(), c.age_level,
                c.conversion.c_str(), c.mean_error_m, c.mean_evaluations, c.completed,
                c.repetitions, c.valid ? "" : " invalid");
  }
}

void cmd_sweep(const Globals& g) {
  const AppConfig cfg = resolve(g);
  const auto scenarios = cfg.scenarios.empty() ? default_scenarios() : cfg.scenarios;
  const auto conversions = cfg.conversions.empty() ? default_sweep_conversions() : cfg.conversions;
  const ExperimentResult res =
      run_sweep(make_setup(cfg, g), scenarios, conversions, progress_printer(g));
  const fs::path dir = out_dir(g);
  write_cells_csv(dir / "sweep.csv", cfg.seed, res.cells);
  write_runs_csv(dir / "sweep_runs.csv", res.runs);
  print_cells(g, res.cells);
}

void cmd_robustness(const Globals& g) {
  const AppConfig cfg = resolve(g);
  const auto scenarios = cfg.scenarios.empty() ? std::vector<std::string>{"FL-200"} : cfg.scenarios;
  const auto conversions =
      cfg.conversions.empty() ? default_robustness_conversions() : cfg.conversions;
  const auto levels = cfg.age_levels.empty() ? default_age_levels() : cfg.age_levels;
  const ExperimentResult res =
      run_experiment(make_setup(cfg, g), scenarios, conversions, levels, progress_printer(g));
  const fs::path dir = out_dir(g);
  write_cells_csv(dir / "robustness.csv", cfg.seed, res.cells);
  write_runs_csv(dir / "robustness_runs.csv", res.runs);
  print_cells(g, res.cells);
}

void cmd_rank(const Globals& g, const std::string& input) {
  const AppConfig cfg = resolve(g);
  const fs::path path = input.empty() ? cfg.sweep_csv : fs::path(input);
  require_file(path, "sweep table");
  const auto cells = read_cells_csv(path);
  const auto ranks = rank_cells(cells);
  write_ranking_csv(out_dir(g) / "ranking.csv", ranks);
  if (!g.quiet) {
    for (const auto& r : ranks) {
      std::printf("%3zu  %-18s %g\n", r.position, r.conversion.c_str(), r.points);
    }
  }
}

void cmd_compare(const Globals& g, const std::string& a_in, const std::string& b_in) {
  const AppConfig cfg = resolve(g);
  const fs::path a_path = a_in.empty() ? cfg.summary_a : fs::path(a_in);
  const fs::path b_path = b_in.empty() ? cfg.summary_b : fs::path(b_in);
  require_file(a_path, "summary a");
  require_file(b_path, "summary b");
  const Comparison c = compare_summaries(read_summary(a_path), read_summary(b_path));
  const std::string delta = c.delta_accuracy_pct ? format_double(*c.delta_accuracy_pct) : "invalid";
  const std::string speed = c.speedup ? format_double(*c.speedup) : "invalid";
  write_key_values(out_dir(g) / "compare.txt",
                   {{"delta_accuracy_pct", delta}, {"speedup", speed}});
  say(g, "delta_accuracy_pct " + delta + "\nspeedup " + speed);
}

LineChart chart_for_sweep(const std::vector<CellResult>& cells, const std::string& scenario) {
  LineChart chart;
  chart.title = "Mean error by conversion, " + scenario;
  chart.x_label = "conversion parameter";
  chart.y_label = "mean error (m)";
  std::map<std::string, ChartSeries> families;
  std::vector<std::pair<std::string, double>> flat;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& c : cells) {
    if (c.scenario != scenario || !c.valid) continue;
    const ConversionSpec spec = ConversionSpec::parse_label(c.conversion);
    if (!has_parameter(spec.kind)) {
      flat.emplace_back(c.conversion, c.mean_error_m);
      continue;
    }
    auto& s = families[std::string(to_string(spec.kind))];
    s.name = std::string(to_string(spec.kind));
    s.points.emplace_back(spec.param, c.mean_error_m);
    lo = any ? std::min(lo, spec.param) : spec.param;
    hi = any ? std::max(hi, spec.param) : spec.param;
    any = true;
  }
  for (auto& [name, s] : families) {
    std::sort(s.points.begin(), s.points.end());
    chart.series.push_back(s);
  }
  if (!any) hi = 1.0;
  for (const auto& [name, err] : flat) chart.series.push_back({name, {{lo, err}, {hi, err}}});
  return chart;
}

LineChart chart_for_robustness(const std::vector<CellResult>& cells, const std::string& scenario) {
  LineChart chart;
  chart.title = "Mean error against map age, " + scenario;
  chart.x_label = "age level";
  chart.y_label = "mean error (m)";
  std::map<std::string, ChartSeries> by_conv;
  for (const auto& c : cells) {
    if (c.scenario != scenario || !c.valid) continue;
    auto& s = by_conv[c.conversion];
    s.name = c.conversion;
    s.points.emplace_back(c.age_level, c.mean_error_m);
  }
  for (auto& [name, s] : by_conv) {
    std::sort(s.points.begin(), s.points.end());
    chart.series.push_back(s);
  }
  return chart;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

void cmd_report(const Globals& g, const std::string& input) {
  const AppConfig cfg = resolve(g);
  const fs::path in = !input.empty() ? fs::path(input)
                      : !cfg.results_dir.empty() ? cfg.results_dir
                                                 : fs::path(g.out);
  const bool has_sweep = fs::exists(in / "sweep.csv");
  const bool has_rob = fs::exists(in / "robustness.csv");
  if (!has_sweep && !has_rob) {
    throw ConfigError("no sweep.csv or robustness.csv in " + in.string());
  }
  const fs::path dir = out_dir(g);
  std::ostringstream md;
  md << "# Localization experiment report\n";
  const auto scenarios_of = [](const std::vector<CellResult>& cells) {
    std::vector<std::string> names;
    for (const auto& c : cells) {
      if (std::find(names.begin(), names.end(), c.scenario) == names.end()) {
        names.push_back(c.scenario);
      }
    }
    return names;
  };
  if (has_sweep) {
    const auto cells = read_cells_csv(in / "sweep.csv");
    md << "\n## Accuracy and speed\n\n| scenario | conversion | mean error (m) | evaluations | "
          "dead reckoning (m) | runs |\n|---|---|---|---|---|---|\n";
    for (const auto& c : cells) {
      char line[256];
      std::snprintf(line, sizeof(line), "| %s | %s | %.3f | %.1f | %.3f | %zu/%zu%s |\n",
                    c.scenario.c_str(), c.conversion.c_str(), c.mean_error_m, c.mean_evaluations,
                    c.mean_dr_error_m, c.completed, c.repetitions, c.valid ? "" : " invalid");
      md << line;
    }
    md << "\n## Ranking\n\n| position | conversion | points |\n|---|---|---|\n";
    for (const auto& r : rank_cells(cells)) {
      md << "| " << r.position << " | " << r.conversion << " | " << format_double(r.points)
         << " |\n";
    }
    for (const auto& sc : scenarios_of(cells)) {
      const std::string name = "sweep_" + sc + ".svg";
      write_text(dir / name, render_svg(chart_for_sweep(cells, sc)));
      md << "\n![" << sc << "](" << name << ")\n";
    }
  }
  if (has_rob) {
    const auto cells = read_cells_csv(in / "robustness.csv");
    md << "\n## Robustness against map age\n\n| scenario | age level | conversion | mean error (m) "
          "|\n|---|---|---|---|\n";
    for (const auto& c : cells) {
      char line[256];
      std::snprintf(line, sizeof(line), "| %s | %g | %s | %.3f |\n", c.scenario.c_str(),
                    c.age_level, c.conversion.c_str(), c.mean_error_m);
      md << line;
    }
    for (const auto& sc : scenarios_of(cells)) {
      const std::string name = "robustness_" + sc + ".svg";
      write_text(dir / name, render_svg(chart_for_robustness(cells, sc)));
      md << "\n![" << sc << "](" << name << ")\n";
    }
  }
  write_text(dir / "report.md", md.str());
  say(g, "wrote " + (dir / "report.md").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map-relative particle filter localization and benchmark harness"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--seed", g.seed, "Seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Concurrent runs in sweeps")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress and tables");

  std::string rank_in, report_in, cmp_a, cmp_b;
  auto* gen_world = app.add_subcommand("gen-world", "Generate a procedural map");
  auto* gen_flight = app.add_subcommand("gen-flight", "Simulate a flight over a map");
  auto* run = app.add_subcommand("run", "Localize one flight");
  auto* sweep = app.add_subcommand("sweep", "Scenario x conversion sweep");
  auto* rank = app.add_subcommand("rank", "Rank conversions from a sweep table");
  rank->add_option("sweep", rank_in, "sweep.csv");
  auto* compare = app.add_subcommand("compare", "Compare two run summaries");
  compare->add_option("a", cmp_a, "Reference summary.txt");
  compare->add_option("b", cmp_b, "Other summary.txt");
  auto* robustness = app.add_subcommand("robustness", "Accuracy against aged maps");
  auto* report = app.add_subcommand("report", "Tables and SVG charts from results");
  report->add_option("results", report_in, "Directory with sweep.csv / robustness.csv");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_world) cmd_gen_world(g);
    else if (*gen_flight) cmd_gen_flight(g);
    else if (*run) cmd_run(g);
    else if (*sweep) cmd_sweep(g);
    else if (*rank) cmd_rank(g, rank_in);
    else if (*compare) cmd_compare(g, cmp_a, cmp_b);
    else if (*robustness) cmd_robustness(g);
    else if (*report) cmd_report(g, report_in);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
