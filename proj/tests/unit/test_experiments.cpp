#include <stdexcept>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "temp_dir.hpp"

#include "aerloc/errors.hpp"
#include "aerloc/experiments.hpp"
#include "aerloc/svg_chart.hpp"

using namespace aerloc;

namespace {

CellResult cell(const std::string& scenario, const std::string& conversion, double error,
                bool valid = true, double level = 0.0) {
  CellResult c;
  c.scenario = scenario;
  c.conversion = conversion;
  c.age_level = level;
  c.mean_error_m = error;
  c.valid = valid;
  c.repetitions = 2;
  c.completed = valid ? 2 : 0;
  return c;
}

double points_of(const std::vector<RankEntry>& ranks, const std::string& conversion) {
  for (const auto& r : ranks) {
    if (r.conversion == conversion) return r.points;
  }
  FAIL("missing conversion " << conversion);
  return 0.0;
}

ExperimentSetup tiny_setup() {
  ExperimentSetup s;
  s.base_seed = 5;
  s.repetitions = 2;
  s.world.size_px = 512;
  s.plan.length = 40.0;
  s.filter.init_particles = 500;
  s.filter.init_radius = 50.0;
  return s;
}

}  // namespace

TEST_CASE("scenario names") {
  const Scenario s = Scenario::parse("UR-150");
  CHECK(s.terrain == TerrainKind::urban_blocks);
  CHECK(s.shape == FlightShape::rectangle);
  CHECK(s.altitude == 150.0);
  CHECK(Scenario::parse("FC-200").shape == FlightShape::circle);
  for (const char* bad : {"XL-200", "FX-200", "FL200", "FL-", "FL-abc", "FL--5"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Scenario::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("repetition seeds are isolated per scenario and repetition") {
  const auto a = repetition_seeds(1, "FL-200", 0);
  CHECK(a.world == repetition_seeds(1, "FL-200", 0).world);
  CHECK(a.world != repetition_seeds(1, "FL-200", 1).world);
  CHECK(a.world != repetition_seeds(1, "UL-200", 0).world);
  CHECK(a.world != repetition_seeds(2, "FL-200", 0).world);
  CHECK(a.world != a.flight);
  CHECK(a.filter != a.age);
}

TEST_CASE("ranking examples") {
  const std::vector<CellResult> cells = {cell("s1", "A", 1.0), cell("s1", "B", 2.0),
                                         cell("s2", "A", 3.0), cell("s2", "B", 4.0)};
  const auto ranks = rank_cells(cells);
  CHECK(points_of(ranks, "A") == 2.0);
  CHECK(points_of(ranks, "B") == 4.0);
  CHECK(ranks.front().conversion == "A");
  CHECK(ranks.front().position == 1);

  const auto tie = rank_cells({cell("s1", "A", 1.0), cell("s1", "B", 1.0), cell("s1", "C", 0.5)});
  CHECK(points_of(tie, "C") == 1.0);
  CHECK(points_of(tie, "A") == 2.5);
  CHECK(points_of(tie, "B") == 2.5);

  std::vector<CellResult> reversed(cells.rbegin(), cells.rend());
  const auto r2 = rank_cells(reversed);
  CHECK(points_of(r2, "A") == 2.0);
  CHECK(points_of(r2, "B") == 4.0);

  const auto invalid = rank_cells({cell("s1", "A", 9.0), cell("s1", "B", 0.0, false),
                                   cell("s1", "C", 0.0, false), cell("s1", "D", 1.0)});
  CHECK(points_of(invalid, "D") == 1.0);
  CHECK(points_of(invalid, "A") == 2.0);
  CHECK(points_of(invalid, "B") == 3.5);
  CHECK(points_of(invalid, "C") == 3.5);
}

TEST_CASE("compare examples") {
  RunSummary a, b;
  a.mean_error_m = 10.0;
  b.mean_error_m = 14.3;
  a.mean_evaluations = 1000.0;
  b.mean_evaluations = 3000.0;
  const Comparison c = compare_summaries(a, b);
  CHECK(*c.delta_accuracy_pct == doctest::Approx(43.0));
  CHECK(*c.speedup == doctest::Approx(3.0));

  const Comparison same = compare_summaries(a, a);
  CHECK(*same.delta_accuracy_pct == 0.0);
  CHECK(*same.speedup == 1.0);

  const Comparison zero = compare_summaries(RunSummary{}, b);
  CHECK_FALSE(zero.delta_accuracy_pct.has_value());
  CHECK_FALSE(zero.speedup.has_value());
}

TEST_CASE("cell and run tables round-trip") {
  TempDir dir;
  std::vector<CellResult> cells = {cell("FL-200", "logistic:0.2", 3.25, true, 0.25),
                                   cell("UL-200", "rectifying:-0.1", 0.0, false)};
  cells[0].mean_evaluations = 1234.5;
  cells[0].mean_dr_error_m = 11.0 / 3.0;
  write_cells_csv(dir / "c.csv", 42, cells);
  const auto back = read_cells_csv(dir / "c.csv");
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].scenario == cells[i].scenario);
    CHECK(back[i].conversion == cells[i].conversion);
    CHECK(back[i].age_level == cells[i].age_level);
    CHECK(back[i].valid == cells[i].valid);
    CHECK(back[i].completed == cells[i].completed);
    CHECK(back[i].repetitions == cells[i].repetitions);
    if (cells[i].valid) {
      CHECK(back[i].mean_error_m == cells[i].mean_error_m);
      CHECK(back[i].mean_evaluations == cells[i].mean_evaluations);
      CHECK(back[i].mean_dr_error_m == cells[i].mean_dr_error_m);
    }
  }

  RunRecord ok;
  ok.scenario = "FL-200";
  ok.conversion = "linear";
  ok.rep = 3;
  ok.seeds = repetition_seeds(1, "FL-200", 3);
  ok.ok = true;
  ok.summary = {201, 2.5, 900.25, 12.0, 1};
  RunRecord bad = ok;
  bad.ok = false;
  bad.summary = {};
  bad.error = "boom, with a comma\nand a newline";
  write_runs_csv(dir / "r.csv", {ok, bad});
  const auto runs = read_runs_csv(dir / "r.csv");
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].seeds.world == ok.seeds.world);
  CHECK(runs[0].seeds.age == ok.seeds.age);
  CHECK(runs[0].summary.mean_evaluations == 900.25);
  CHECK(runs[0].summary.degenerate_frames == 1);
  CHECK(runs[0].ok);
  CHECK_FALSE(runs[1].ok);
  CHECK_FALSE(runs[1].error.empty());

  const auto ranks = rank_cells(cells);
  write_ranking_csv(dir / "k.csv", ranks);
  CHECK(std::filesystem::file_size(dir / "k.csv") > 0);
}

TEST_CASE("experiment bookkeeping and seed isolation") {
  const ExperimentSetup setup = tiny_setup();
  const std::vector<ConversionSpec> convs = {{ConversionKind::linear, 0.0},
                                             {ConversionKind::logistic, 0.2},
                                             {ConversionKind::rectifying, 0.1},
                                             {ConversionKind::rectifying, 0.0}};
  std::size_t last_done = 0, total = 0;
  const auto one = run_sweep(setup, {"FL-200"}, convs, [&](std::size_t d, std::size_t t) {
    CHECK(d == last_done + 1);
    last_done = d;
    total = t;
  });
  CHECK(one.cells.size() == 4);
  CHECK(one.runs.size() == 8);
  CHECK(total == 8);
  for (const auto& c : one.cells) {
    CHECK(c.valid);
    CHECK(c.completed == 2);
  }

  const auto two = run_sweep(setup, {"UL-200", "FL-200"}, convs);
  CHECK(two.cells.size() == 8);
  for (const auto& c : one.cells) {
    const auto it = std::find_if(two.cells.begin(), two.cells.end(), [&](const CellResult& o) {
      return o.scenario == c.scenario && o.conversion == c.conversion;
    });
    REQUIRE(it != two.cells.end());
    CHECK(it->mean_error_m == c.mean_error_m);
    CHECK(it->mean_evaluations == c.mean_evaluations);
  }

  ExperimentSetup threaded = setup;
  threaded.jobs = 2;
  const auto par = run_sweep(threaded, {"FL-200"}, convs);
  for (std::size_t i = 0; i < par.cells.size(); ++i) {
    CHECK(par.cells[i].mean_error_m == one.cells[i].mean_error_m);
  }

  const auto rob = run_experiment(setup, {"FL-200"}, convs, {0.0, 0.5});
  CHECK(rob.cells.size() == 8);
  for (std::size_t i = 0; i < convs.size(); ++i) {
    CHECK(rob.cells[i].age_level == 0.0);
    CHECK(rob.cells[i].mean_error_m == one.cells[i].mean_error_m);
  }
}

TEST_CASE("failing runs mark cells invalid without aborting") {
  ExperimentSetup setup = tiny_setup();
  setup.plan.length = 5000.0;  // cannot fit on the map
  const auto r = run_sweep(setup, {"FL-200"}, {ConversionSpec{}});
  REQUIRE(r.cells.size() == 1);
  CHECK_FALSE(r.cells[0].valid);
  CHECK(r.cells[0].completed == 0);
  for (const auto& run : r.runs) {
    CHECK_FALSE(run.ok);
    CHECK_FALSE(run.error.empty());
  }
}

TEST_CASE("experiment argument validation") {
  const ExperimentSetup setup = tiny_setup();
  CHECK_THROWS_AS(run_sweep(setup, {}, {ConversionSpec{}}), ConfigError);
  CHECK_THROWS_AS(run_sweep(setup, {"FL-200"}, {}), ConfigError);
  CHECK_THROWS_AS(run_sweep(setup, {"ZZ-1"}, {ConversionSpec{}}), ConfigError);
  CHECK_THROWS_AS(run_experiment(setup, {"FL-200"}, {ConversionSpec{}}, {}), ConfigError);
}

TEST_CASE("default grids") {
  CHECK(default_sweep_conversions().size() == 12);
  CHECK(default_scenarios() == std::vector<std::string>{"FL-200", "UL-200"});
  CHECK(default_age_levels() == std::vector<double>{0.0, 0.25, 0.5});
  const auto rob = default_robustness_conversions();
  CHECK(std::find(rob.begin(), rob.end(), ConversionSpec{ConversionKind::logistic, 0.05}) != rob.end());
}

TEST_CASE("svg charts") {
  LineChart chart;
  chart.title = "a < b & c";
  chart.x_label = "age level";
  chart.y_label = "error [m]";
  chart.series = {{"logistic:0.2", {{0, 1.0}, {0.25, 1.5}, {0.5, 2.0}}},
                  {"linear", {{0, 3.0}, {0.5, 4.0}}}};
  const std::string svg = render_svg(chart);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg.find("logistic:0.2") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(render_svg(LineChart{}).find("</svg>") != std::string::npos);
}
