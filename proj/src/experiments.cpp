#include "aerloc/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "aerloc/errors.hpp"
#include "aerloc/text_io.hpp"

namespace aerloc {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// World, trajectory, frames and matching maps shared by every conversion of
// one (scenario, repetition).
struct RepetitionData {
  RepetitionSeeds seeds;
  std::optional<RasterMap> map;
  FlightLog flight;
  std::vector<RasterMap> matching;  // one per age level
  std::string error;
};

RepetitionData prepare(const ExperimentSetup& setup, const Scenario& sc,
                       const std::vector<double>& levels, std::size_t rep) {
  RepetitionData data;
  data.seeds = repetition_seeds(setup.base_seed, sc.name, rep);
  try {
    WorldSpec world = setup.world;
    world.terrain = sc.terrain;
    world.seed = data.seeds.world;
    data.map.emplace(generate_world(world));
    FlightPlan plan = setup.plan;
    plan.shape = sc.shape;
    plan.altitude = sc.altitude;
    plan.start = centered_start(plan, *data.map);
    data.flight = simulate_flight(*data.map, plan, setup.sensor_noise_sigma,
                                  setup.odometry_drift, setup.odometry_noise,
                                  data.seeds.flight);
    for (const double level : levels) {
      data.matching.push_back(level > 0.0
                                  ? age_map(*data.map, AgeSpec::from_level(level, data.seeds.age))
                                  : *data.map);
    }
  } catch (const std::exception& e) {
    data.error = e.what();
  }
  return data;
}

std::string sanitize(std::string text) {
  std::replace_if(text.begin(), text.end(),
                  [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
  return text;
}

bool parse_bool(const std::string& text) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw IoError("expected 0 or 1, got '" + text + "'");
}

}  // namespace

Scenario Scenario::parse(std::string_view name) {
  const auto fail = [&] {
    return std::invalid_argument("scenario '" + std::string(name) +
                                 "' must look like FL-200 (terrain F|U, shape L|C|R, altitude)");
  };
  if (name.size() < 4 || name[2] != '-') throw fail();
  Scenario sc;
  sc.name = std::string(name);
  switch (name[0]) {
    case 'F': sc.terrain = TerrainKind::fractal; break;
    case 'U': sc.terrain = TerrainKind::urban_blocks; break;
    default: throw fail();
  }
  switch (name[1]) {
    case 'L': sc.shape = FlightShape::line; break;
    case 'C': sc.shape = FlightShape::circle; break;
    case 'R': sc.shape = FlightShape::rectangle; break;
    default: throw fail();
  }
  try {
    sc.altitude = parse_double(name.substr(3));
  } catch (const std::exception&) {
    throw fail();
  }
  if (!(sc.altitude > 0.0)) throw fail();
  return sc;
}

RepetitionSeeds repetition_seeds(std::uint64_t base_seed, std::string_view scenario,
                                 std::size_t rep) {
  const std::uint64_t key =
      mix_seed(mix_seed(base_seed) ^ fnv1a(scenario) ^ mix_seed(0xA5A5ULL + rep));
  return {mix_seed(key + 1), mix_seed(key + 2), mix_seed(key + 3), mix_seed(key + 4)};
}

std::vector<ConversionSpec> default_sweep_conversions() {
  std::vector<ConversionSpec> out = {{ConversionKind::linear, 0.0},
                                     {ConversionKind::softmax, 0.0}};
  for (const double d : {0.2, 0.1, 0.0, -0.1, -0.2}) out.push_back({ConversionKind::rectifying, d});
  for (const double v : {0.7, 0.4, 0.2, 0.1, 0.05}) out.push_back({ConversionKind::logistic, v});
  return out;
}

std::vector<ConversionSpec> default_robustness_conversions() {
  std::vector<ConversionSpec> out;
  for (const double v : {0.7, 0.4, 0.2, 0.05}) out.push_back({ConversionKind::logistic, v});
  for (const double d : {0.2, 0.1, 0.0}) out.push_back({ConversionKind::rectifying, d});
  return out;
}

std::vector<std::string> default_scenarios() { return {"FL-200", "UL-200"}; }

std::vector<double> default_age_levels() { return {0.0, 0.25, 0.5}; }

ExperimentResult run_experiment(const ExperimentSetup& setup,
                                const std::vector<std::string>& scenario_names,
                                const std::vector<ConversionSpec>& conversions,
                                const std::vector<double>& age_levels,
                                const ProgressFn& progress) {
  if (scenario_names.empty()) throw ConfigError("experiment needs at least one scenario");
  if (conversions.empty()) throw ConfigError("experiment needs at least one conversion");
  if (age_levels.empty()) throw ConfigError("experiment needs at least one age level");
  if (setup.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (setup.jobs < 1) throw ConfigError("jobs must be >= 1");
  std::vector<Scenario> scenarios;
  try {
    for (const auto& name : scenario_names) scenarios.push_back(Scenario::parse(name));
    for (const auto& c : conversions) c.validate();
    setup.filter.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const std::size_t n_sc = scenarios.size(), n_lv = age_levels.size(),
                    n_cv = conversions.size(), n_rep = setup.repetitions;
  const int jobs = setup.jobs;

  std::vector<RepetitionData> data(n_sc * n_rep);
  const auto n_data = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
  for (std::ptrdiff_t i = 0; i < n_data; ++i) {
    const auto s = static_cast<std::size_t>(i) / n_rep;
    const auto r = static_cast<std::size_t>(i) % n_rep;
    data[i] = prepare(setup, scenarios[s], age_levels, r);
  }

  FilterConfig filter = setup.filter;
  filter.parallel = jobs == 1;

  ExperimentResult result;
  result.runs.resize(n_sc * n_lv * n_cv * n_rep);
  const auto total = static_cast<std::ptrdiff_t>(result.runs.size());
  std::size_t done = 0;
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    auto idx = static_cast<std::size_t>(i);
    const std::size_t rep = idx % n_rep;
    idx /= n_rep;
    const std::size_t c = idx % n_cv;
    idx /= n_cv;
    const std::size_t l = idx % n_lv;
    const std::size_t s = idx / n_lv;

    const RepetitionData& d = data[s * n_rep + rep];
    RunRecord& rec = result.runs[i];
    rec.scenario = scenarios[s].name;
    rec.age_level = age_levels[l];
    rec.conversion = conversions[c].label();
    rec.rep = rep;
    rec.seeds = d.seeds;
    if (!d.error.empty()) {
      rec.error = d.error;
    } else {
      try {
        rec.summary = run_flight(d.flight, d.matching[l], conversions[c], filter,
                                 d.seeds.filter).summary();
        rec.ok = true;
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
    }
#pragma omp critical(aerloc_progress)
    {
      ++done;
      if (progress) progress(done, result.runs.size());
    }
  }

  for (std::size_t s = 0; s < n_sc; ++s) {
    for (std::size_t l = 0; l < n_lv; ++l) {
      for (std::size_t c = 0; c < n_cv; ++c) {
        CellResult cell;
        cell.scenario = scenarios[s].name;
        cell.age_level = age_levels[l];
        cell.conversion = conversions[c].label();
        cell.repetitions = n_rep;
        const std::size_t base = ((s * n_lv + l) * n_cv + c) * n_rep;
        for (std::size_t r = 0; r < n_rep; ++r) {
          const RunRecord& rec = result.runs[base + r];
          if (!rec.ok) continue;
          ++cell.completed;
          cell.mean_error_m += rec.summary.mean_error_m;
          cell.mean_evaluations += rec.summary.mean_evaluations;
          cell.mean_dr_error_m += rec.summary.mean_dr_error_m;
        }
        cell.valid = cell.completed > 0;
        if (cell.valid) {
          const auto k = static_cast<double>(cell.completed);
          cell.mean_error_m /= k;
          cell.mean_evaluations /= k;
          cell.mean_dr_error_m /= k;
        }
        result.cells.push_back(cell);
      }
    }
  }
  return result;
}

ExperimentResult run_sweep(const ExperimentSetup& setup,
                           const std::vector<std::string>& scenarios,
                           const std::vector<ConversionSpec>& conversions,
                           const ProgressFn& progress) {
  return run_experiment(setup, scenarios, conversions, {0.0}, progress);
}

void write_cells_csv(const std::filesystem::path& path, std::uint64_t base_seed,
                     const std::vector<CellResult>& cells) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# base_seed=" << base_seed << '\n';
  out << "scenario,age_level,conversion,repetitions,completed,valid,mean_error_m,"
         "mean_evaluations,mean_dr_error_m\n";
  for (const auto& c : cells) {
    out << c.scenario << ',' << format_double(c.age_level) << ',' << c.conversion << ','
        << c.repetitions << ',' << c.completed << ',' << (c.valid ? 1 : 0) << ','
        << format_double(c.mean_error_m) << ',' << format_double(c.mean_evaluations) << ','
        << format_double(c.mean_dr_error_m) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<CellResult> read_cells_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_sc = t.column("scenario"), c_lv = t.column("age_level"),
                    c_cv = t.column("conversion"), c_rep = t.column("repetitions"),
                    c_done = t.column("completed"), c_valid = t.column("valid"),
                    c_err = t.column("mean_error_m"), c_ev = t.column("mean_evaluations"),
                    c_dr = t.column("mean_dr_error_m");
  std::vector<CellResult> cells;
  for (const auto& row : t.rows) {
    CellResult c;
    c.scenario = row[c_sc];
    c.age_level = parse_double(row[c_lv]);
    c.conversion = row[c_cv];
    c.repetitions = parse_u64(row[c_rep]);
    c.completed = parse_u64(row[c_done]);
    c.valid = parse_bool(row[c_valid]);
    c.mean_error_m = parse_double(row[c_err]);
    c.mean_evaluations = parse_double(row[c_ev]);
    c.mean_dr_error_m = parse_double(row[c_dr]);
    cells.push_back(std::move(c));
  }
  return cells;
}

void write_runs_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "scenario,age_level,conversion,rep,world_seed,flight_seed,filter_seed,age_seed,ok,"
         "frames,mean_error_m,mean_evaluations,mean_dr_error_m,degenerate_frames,error\n";
  for (const auto& r : runs) {
    out << r.scenario << ',' << format_double(r.age_level) << ',' << r.conversion << ','
        << r.rep << ',' << r.seeds.world << ',' << r.seeds.flight << ',' << r.seeds.filter
        << ',' << r.seeds.age << ',' << (r.ok ? 1 : 0) << ',' << r.summary.frames << ','
        << format_double(r.summary.mean_error_m) << ','
        << format_double(r.summary.mean_evaluations) << ','
        << format_double(r.summary.mean_dr_error_m) << ',' << r.summary.degenerate_frames
        << ',' << sanitize(r.error) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_sc = t.column("scenario"), c_lv = t.column("age_level"),
                    c_cv = t.column("conversion"), c_rep = t.column("rep"),
                    c_ws = t.column("world_seed"), c_fs = t.column("flight_seed"),
                    c_ps = t.column("filter_seed"), c_as = t.column("age_seed"),
                    c_ok = t.column("ok"), c_fr = t.column("frames"),
                    c_err = t.column("mean_error_m"), c_ev = t.column("mean_evaluations"),
                    c_dr = t.column("mean_dr_error_m"), c_dg = t.column("degenerate_frames"),
                    c_msg = t.column("error");
  std::vector<RunRecord> runs;
  for (const auto& row : t.rows) {
    RunRecord r;
    r.scenario = row[c_sc];
    r.age_level = parse_double(row[c_lv]);
    r.conversion = row[c_cv];
    r.rep = parse_u64(row[c_rep]);
    r.seeds = {parse_u64(row[c_ws]), parse_u64(row[c_fs]), parse_u64(row[c_ps]),
               parse_u64(row[c_as])};
    r.ok = parse_bool(row[c_ok]);
    r.summary.frames = parse_u64(row[c_fr]);
    r.summary.mean_error_m = parse_double(row[c_err]);
    r.summary.mean_evaluations = parse_double(row[c_ev]);
    r.summary.mean_dr_error_m = parse_double(row[c_dr]);
    r.summary.degenerate_frames = parse_u64(row[c_dg]);
    r.error = c_msg < row.size() ? row[c_msg] : std::string();
    runs.push_back(std::move(r));
  }
  return runs;
}

std::vector<RankEntry> rank_cells(const std::vector<CellResult>& cells) {
  std::map<std::pair<std::string, double>, std::vector<const CellResult*>> groups;
  for (const auto& c : cells) groups[{c.scenario, c.age_level}].push_back(&c);

  std::map<std::string, double> totals;
  for (const auto& c : cells) totals.emplace(c.conversion, 0.0);
  for (auto& [key, group] : groups) {
    std::stable_sort(group.begin(), group.end(), [](const CellResult* a, const CellResult* b) {
      if (a->valid != b->valid) return a->valid;
      return a->valid && a->mean_error_m < b->mean_error_m;
    });
    for (std::size_t i = 0; i < group.size();) {
      std::size_t j = i + 1;
      while (j < group.size() && group[j]->valid == group[i]->valid &&
             (!group[i]->valid || group[j]->mean_error_m == group[i]->mean_error_m)) {
        ++j;
      }
      // Positions i+1 .. j share their mean.
      const double points = 0.5 * static_cast<double>(i + 1 + j);
      for (std::size_t k = i; k < j; ++k) totals[group[k]->conversion] += points;
      i = j;
    }
  }

  std::vector<RankEntry> ranks;
  for (const auto& [conversion, points] : totals) ranks.push_back({conversion, points, 0});
  std::stable_sort(ranks.begin(), ranks.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.points < b.points; });
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    ranks[i].position = i > 0 && ranks[i].points == ranks[i - 1].points ? ranks[i - 1].position
                                                                        : i + 1;
  }
  return ranks;
}

void write_ranking_csv(const std::filesystem::path& path, const std::vector<RankEntry>& ranks) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "position,conversion,points\n";
  for (const auto& r : ranks) {
    out << r.position << ',' << r.conversion << ',' << format_double(r.points) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Comparison compare_summaries(const RunSummary& a, const RunSummary& b) {
  Comparison c;
  if (a.mean_error_m != 0.0) {
    c.delta_accuracy_pct = (b.mean_error_m - a.mean_error_m) / a.mean_error_m * 100.0;
  }
  if (a.mean_evaluations != 0.0) c.speedup = b.mean_evaluations / a.mean_evaluations;
  return c;
}

}  // namespace aerloc
