#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "config.hpp"
#include "csv_io.hpp"
#include "error.hpp"

using namespace psimax;
using std::numbers::pi;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("psimax_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{};
}

}  // namespace

TEST_CASE("default config mirrors the simulation setup") {
  ExperimentConfig c;
  CHECK(c.n_scenarios == 100000);
  CHECK(c.l_min == 4);
  REQUIRE(c.phi_grid.size() == 128);
  CHECK(c.phi_grid.front() == doctest::Approx(2 * pi / 128));
  CHECK(c.phi_grid.back() == 2 * pi);
  CHECK(c.psi_bin_edges.size() == 5);
  CHECK(c.network.seed == 1);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config text parsing") {
  ExperimentConfig c;
  apply_config_text(c,
                    "# comment\n"
                    "f = 0.25\n"
                    "beta_over_gamma_db = -7.5  # trailing comment\n"
                    "n_scenarios = 1e4\n"
                    "phi_grid = pi/4, pi, 3*pi/2\n"
                    "psi_bin_edges = 0, pi, 2*pi\n"
                    "candidates = active\n"
                    "seed = 77\n"
                    "threads = auto\n"
                    "sweep_param = beta_over_gamma_db\n"
                    "sweep_values = -10, -5, 0\n"
                    "out = somewhere\n",
                    "inline");
  CHECK(c.network.load == 0.25);
  CHECK(c.network.beta_over_gamma_db == -7.5);
  CHECK(c.n_scenarios == 10000);
  REQUIRE(c.phi_grid.size() == 3);
  CHECK(c.phi_grid[0] == doctest::Approx(pi / 4));
  CHECK(c.phi_grid[2] == doctest::Approx(1.5 * pi));
  CHECK(c.network.candidates == CandidatePolicy::active_only);
  CHECK(c.network.seed == 77);
  CHECK(c.threads == 0);
  REQUIRE(c.sweep);
  CHECK(c.sweep->param == SweepParam::beta_over_gamma_db);
  CHECK(c.sweep->values.size() == 3);
  CHECK(c.output_dir == std::filesystem::path("somewhere"));
  CHECK_NOTHROW(c.validate());
  CHECK(apply_sweep(c.network, SweepParam::load, 0.1).load == 0.1);
  CHECK(parse_angle("0.5*pi", "x") == doctest::Approx(pi / 2));
}

TEST_CASE("config errors") {
  ExperimentConfig c;
  CHECK(code_of([&] { apply_config_text(c, "nonsense = 1\n", "cfg"); }) == Errc::config);
  CHECK(code_of([&] { apply_config_text(c, "just a line\n", "cfg"); }) == Errc::config);
  CHECK(code_of([&] { apply_setting(c, "alpha", "two"); }) == Errc::config);
  CHECK(code_of([&] { apply_setting(c, "n_scenarios", "1.5"); }) == Errc::config);
  try {
    apply_config_text(c, "\n\nbogus = 3\n", "my.cfg");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("my.cfg:3") != std::string::npos);
  }

  ExperimentConfig v;
  v.n_scenarios = 0;
  CHECK(code_of([&] { v.validate(); }) == Errc::config);
  v = ExperimentConfig{};
  v.phi_grid = {1.0, 0.5};
  CHECK(code_of([&] { v.validate(); }) == Errc::config);
  v.phi_grid = {1.0, 7.0};
  CHECK(code_of([&] { v.validate(); }) == Errc::config);
  v = ExperimentConfig{};
  v.network.load = 2;
  CHECK(code_of([&] { v.validate(); }) == Errc::config);
  v = ExperimentConfig{};
  v.sweep = Sweep{SweepParam::load, {0.5, 1.2}};
  CHECK(code_of([&] { v.validate(); }) == Errc::config);
  v = ExperimentConfig{};
  v.l_min = 2;
  CHECK(code_of([&] { v.validate(); }) == Errc::config);

  CHECK(code_of([] { load_config("/nonexistent/psimax.cfg"); }) == Errc::io);
}

TEST_CASE("config file loading") {
  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "a.cfg");
    f << "lambda = 1e-5\nwindow_radius = 3000\n";
  }
  const auto c = load_config(dir / "a.cfg");
  CHECK(c.network.lambda == 1e-5);
  CHECK(c.network.window_radius == 3000);
}

TEST_CASE("results round trip with schema and header") {
  const auto dir = scratch("csv");
  std::vector<ResultRow> rows{{0, 4, 2.5, 1.25, 1.5, true, false},
                              {9, 5, 0.1 + 0.2, std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(), false, false},
                              {12, 4, pi, 3.0, 4.0, false, true}};
  {
    auto out = open_csv(dir, "results.csv", "results", kResultsHeader);
    std::string buf;
    for (const auto& r : rows) append_result_row(buf, r);
    out << buf;
  }
  const auto text = slurp(dir / "results.csv");
  CHECK(text.rfind("# psimax results schema_version=1\n" + std::string(kResultsHeader) + "\n", 0) == 0);
  const auto back = read_results(dir / "results.csv");
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].scenario_id == rows[i].scenario_id);
    CHECK(back[i].count == rows[i].count);
    CHECK(back[i].psi_max == rows[i].psi_max);
    CHECK(back[i].gdop_toa == rows[i].gdop_toa);
    CHECK(back[i].gdop_tdoa == rows[i].gdop_tdoa);
    CHECK(back[i].inside_hull == rows[i].inside_hull);
    CHECK(back[i].degenerate == rows[i].degenerate);
  }
}

TEST_CASE("schema mismatches are rejected") {
  const auto dir = scratch("schema");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "v2.csv");
    f << "# psimax results schema_version=2\n" << kResultsHeader << "\n";
  }
  CHECK(code_of([&] { read_results(dir / "v2.csv"); }) == Errc::schema);
  {
    std::ofstream f(dir / "hdr.csv");
    f << schema_line("results") << "\nscenario_id,L,psi\n";
  }
  CHECK(code_of([&] { read_results(dir / "hdr.csv"); }) == Errc::schema);
  {
    std::ofstream f(dir / "row.csv");
    f << schema_line("results") << "\n" << kResultsHeader << "\n1,4,abc,1,1,0,0\n";
  }
  CHECK(code_of([&] { read_results(dir / "row.csv"); }) == Errc::schema);
  CHECK(code_of([&] { read_results(dir / "missing.csv"); }) == Errc::io);
}

TEST_CASE("summary and curves files") {
  const auto dir = scratch("sc");
  std::vector<SummaryEntry> s{{"p_n_ge_lmin", "4", 0.08, 0.001},
                              {"n_scenarios", "", 100, std::nan("")}};
  write_summary(dir, s);
  CHECK(slurp(dir / "summary.csv") ==
        "# psimax summary schema_version=1\nstatistic,arg,value,std_error\n"
        "p_n_ge_lmin,4,0.08,0.001\nn_scenarios,,100,\n");
  std::vector<CurvePoint> c{{"stevens_L4", pi, 0.5}};
  write_curves(dir, c);
  CHECK(slurp(dir / "curves.csv") ==
        "# psimax curves schema_version=1\ncurve_id,x,F\nstevens_L4,3.141592653589793,0.5\n");
}

TEST_CASE("unwritable output directory") {
  const auto dir = scratch("ro");
  std::filesystem::create_directories(dir);
  { std::ofstream f(dir / "file"); }
  CHECK(code_of([&] { open_csv(dir / "file", "results.csv", "results", kResultsHeader); }) == Errc::io);
}
