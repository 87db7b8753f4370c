// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Runs at desk scale (1e5 scenarios, seed 1) and takes a few minutes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "analytic_dist.hpp"
#include "angular_geometry.hpp"
#include "experiment.hpp"
#include "oracles.hpp"
#include "stats.hpp"

#ifndef PSIMAX_CLI_PATH
#error "PSIMAX_CLI_PATH must point at the CLI executable"
#endif

using namespace psimax;
using std::numbers::pi;

namespace {

constexpr std::size_t kScenarios = 100000;
constexpr std::uint64_t kSeed = 1;

int g_failures = 0;

void verdict(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::filesystem::path work_dir() {
  static const auto dir = [] {
    auto d = std::filesystem::temp_directory_path() / "psimax_acceptance";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PSIMAX_CLI_PATH) + " " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

ExperimentConfig default_run_config() {
  ExperimentConfig c;
  c.n_scenarios = kScenarios;
  c.network.seed = kSeed;
  c.threads = 0;
  return c;
}

void stevens_identities() {
  double worst = 0;
  for (std::size_t L = 3; L <= 20; ++L) {
    const double expect = oracle::center_in_hull(L);
    worst = std::max(worst, std::fabs(stevens_cdf(L, pi) - expect) / expect);
  }
  bool exact = stevens_cdf(4, pi / 2) == 0.0;
  for (std::size_t L = 1; L <= 50; ++L) exact = exact && stevens_cdf(L, 2 * pi) == 1.0;
  verdict("Stevens closed-form identities", worst <= 1e-12 && exact,
          fmt("max rel err at pi over L=3..20 = %.2e; F(4,pi/2)=0 and F(L,2pi)=1 exact: %s", worst,
              exact ? "yes" : "no"));
}

void per_l_cdf_agreement() {
  // f = 0.5 gives >= 1e4 conditioned samples for L = 4..7 at 3e5 scenarios.
  auto c = default_run_config();
  c.n_scenarios = 300000;
  c.network.load = 0.5;
  std::map<std::size_t, std::vector<double>> by_l;
  simulate(c, [&](std::span<const ResultRow> rows) {
    for (const auto& r : rows) {
      if (r.count >= 4 && r.count <= 7) by_l[r.count].push_back(r.psi_max);
    }
  });
  bool ok = true;
  std::string detail;
  for (std::size_t L = 4; L <= 7; ++L) {
    const auto& v = by_l[L];
    const double d = v.empty() ? 1.0 : ks_distance(ecdf(v), [L](double phi) {
      return phi <= 0 ? 0.0 : stevens_cdf(L, std::min(phi, 2 * pi));
    });
    ok = ok && v.size() >= 10000 && d < 0.015;
    detail += fmt("L=%zu n=%zu KS=%.4f; ", L, v.size(), d);
  }
  verdict("Per-L empirical psi_max vs Stevens CDF (KS < 0.015, >= 1e4 samples)", ok, detail);
}

void correlation_table(const std::vector<ResultRow>& rows) {
  const std::vector<double> edges{0, pi / 2, pi, 1.5 * pi, 2 * pi};
  const auto rep = correlate_rows(rows, 4, edges);
  const auto& l4 = rep.bins[0];
  const auto& all = rep.bins[3];
  const bool s_ok = all.available && std::fabs(all.spearman - 0.912) <= 0.02;
  const bool lg_ok = all.available && std::fabs(all.pearson_log_gdop - 0.871) <= 0.03;
  const bool p_ok = l4.available && std::fabs(l4.pearson_gdop - 0.029) <= 0.05;
  verdict("Correlation table (1e5 scenarios)", s_ok && lg_ok && p_ok,
          fmt("Spearman(L>=4)=%.4f [%s, target 0.912+-0.02]; Pearson log GDOP(L>=4)=%.4f [%s, target "
              "0.871+-0.03]; Pearson GDOP(L=4)=%.4f [%s, target 0.029+-0.05]; rows L>=4=%zu",
              all.spearman, s_ok ? "ok" : "out", all.pearson_log_gdop, lg_ok ? "ok" : "out",
              l4.pearson_gdop, p_ok ? "ok" : "out", all.rows));
}

double p_psi_le_pi(double load) {
  auto c = default_run_config();
  c.network.load = load;
  c.phi_grid = {pi};
  const auto s = simulate(c, {});
  return s.p_psi_at_most(0);
}

void load_endpoints(double p_f1) {
  const double p_f01 = p_psi_le_pi(0.1);
  auto c = default_run_config();
  c.sweep = Sweep{SweepParam::load, {0.1, 0.25, 0.5, 0.75, 1.0}};
  const auto rep = run_analytic(c);
  std::map<std::string, std::vector<double>> curves;
  for (const auto& p : rep.curves) {
    if (p.curve_id.rfind("weighted_Lge4_f=", 0) == 0) curves[p.curve_id].push_back(p.F);
  }
  const std::vector<std::string> order{"weighted_Lge4_f=0.1", "weighted_Lge4_f=0.25", "weighted_Lge4_f=0.5",
                                       "weighted_Lge4_f=0.75", "weighted_Lge4_f=1"};
  bool ordered = curves.size() == order.size();
  std::size_t violations = 0;
  for (std::size_t i = 0; ordered && i + 1 < order.size(); ++i) {
    const auto& lo = curves[order[i]];
    const auto& hi = curves[order[i + 1]];
    for (std::size_t k = 0; k < lo.size(); ++k) violations += lo[k] < hi[k];
  }
  ordered = ordered && violations == 0;
  const bool e1 = std::fabs(p_f1 - 0.50) <= 0.03;
  const bool e01 = std::fabs(p_f01 - 0.95) <= 0.02;
  verdict("Load endpoints and ordering of the load sweep", e1 && e01 && ordered,
          fmt("P(psi<=pi|N>=4) f=1: %.4f [%s, 0.50+-0.03]; f=0.1: %.4f [%s, 0.95+-0.02]; sweep ordering "
              "violations: %zu",
              p_f1, e1 ? "ok" : "out", p_f01, e01 ? "ok" : "out", violations));
}

void hull_split_criterion(const std::vector<ResultRow>& rows) {
  const auto rep = hull_split_rows(rows, 4);
  bool ok = true;
  std::string detail;
  for (const auto& g : rep.groups) {
    const bool g_ok = g.inside_rows > 0 && g.outside_rows > 0 && g.inside_p95 <= 4.0 &&
                      g.outside_median > g.inside_median;
    ok = ok && g_ok;
    detail += fmt("%s: inside p95=%.3f, median inside=%.3f outside=%.3f; ", g.label.c_str(), g.inside_p95,
                  g.inside_median, g.outside_median);
  }
  verdict("Inside-hull GDOP p95 <= 4 and outside median above inside", ok, detail);
}

void gdop_bound_property() {
  std::mt19937_64 rng(101);
  std::size_t bound_violations = 0, identity_violations = 0, checked = 0;
  double worst = 0;
  for (int t = 0; t < 100000; ++t) {
    const auto b = oracle::random_bearings(rng, 2 + t % 11);
    const auto a = AngleSet::from_bearings(b);
    const double m = gdop_toa_matrix(a);
    const double s = gdop_toa_anglesum(a);
    const double rel = std::fabs(m - s) / m;
    worst = std::max(worst, rel);
    identity_violations += !(rel <= 1e-9);
    const double psi = psi_max(a);
    if (std::sin(psi) != 0.0) {
      ++checked;
      bound_violations += !(m <= oracle::gdop_bound_with_rounding(a.size(), psi) * (1 + 1e-12));
    }
  }
  verdict("GDOP bound and matrix/angle-sum identity", bound_violations == 0 && identity_violations == 0,
          fmt("1e5 random sets, bound checked on %zu: %zu violations; identity max rel err %.2e", checked,
              bound_violations, worst));
}

void hull_equivalence() {
  std::mt19937_64 rng(102);
  std::size_t disagree = 0, degenerate = 0;
  for (int t = 0; t < 100000; ++t) {
    const auto b = oracle::random_bearings(rng, 3 + t % 8);
    const auto h = inside_convex_hull(AngleSet::from_bearings(b));
    if (h.degenerate) {
      ++degenerate;
      continue;
    }
    disagree += oracle::origin_strictly_inside(oracle::convex_hull(oracle::points_on_bearings(rng, b))) != h.inside;
  }
  verdict("Hull classification vs brute-force convex hull", disagree == 0,
          fmt("1e5 random sets: %zu disagreements, %zu flagged degenerate", disagree, degenerate));
}

void expected_bs_gate() {
  std::mt19937_64 rng(103);
  bool ok = true;
  std::string detail;
  for (double phi : {pi / 2, pi, 1.5 * pi}) {
    const int runs = 200000;
    double sum = 0;
    for (int r = 0; r < runs; ++r) sum += static_cast<double>(oracle::stopping_count(rng, phi));
    const double mc = sum / runs;
    const auto e = expected_bs_for_target(phi);
    const double rel = std::fabs(e.value - mc) / mc;
    ok = ok && rel <= 0.01 && e.method == ExpectedBsMethod::analytic;
    detail += fmt("phi=%.4f analytic=%.4f oracle=%.4f rel=%.4f; ", phi, e.value, mc, rel);
  }
  for (double phi : {pi / 8, pi / 16, pi / 32}) {
    const double ratio = expected_bs_for_target(phi / 2).value / expected_bs_for_target(phi).value;
    ok = ok && ratio > 1.9 && ratio < 2.4;
    detail += fmt("ratio(%.4f)=%.3f; ", phi, ratio);
  }
  verdict("Expected BS count vs stopping-time oracle and growth window", ok, detail);
}

void determinism(const std::filesystem::path& dir) {
  const auto base = std::string(" --scenarios ") + std::to_string(kScenarios) + " --seed " + std::to_string(kSeed);
  const auto a = dir / "t1a", b = dir / "t1b", c = dir / "t4";
  const int rc = run_cli("simulate" + base + " --threads 1 --out " + a.string()) |
                 run_cli("simulate" + base + " --threads 1 --out " + b.string()) |
                 run_cli("simulate" + base + " --threads 4 --out " + c.string());
  const auto ra = slurp(a / "results.csv");
  const bool same = rc == 0 && !ra.empty() && ra == slurp(b / "results.csv") && ra == slurp(c / "results.csv");
  verdict("Byte-identical results.csv across runs and thread counts {1, 4}", same,
          fmt("CLI exit codes %s, results.csv size %zu bytes", rc == 0 ? "ok" : "nonzero", ra.size()));
}

}  // namespace

int main() {
  const auto dir = work_dir();
  const auto guarded = [](const char* name, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      verdict(name, false, std::string("exception: ") + e.what());
    }
  };

  guarded("Stevens closed-form identities", stevens_identities);
  guarded("GDOP bound and matrix/angle-sum identity", gdop_bound_property);
  guarded("Hull classification vs brute-force convex hull", hull_equivalence);
  guarded("Expected BS count vs stopping-time oracle and growth window", expected_bs_gate);
  guarded("Byte-identical results.csv across runs and thread counts {1, 4}", [&] { determinism(dir); });

  std::vector<ResultRow> rows;
  guarded("Correlation table (1e5 scenarios)", [&] {
    rows = read_results(dir / "t1a" / "results.csv");
    correlation_table(rows);
  });
  guarded("Load endpoints and ordering of the load sweep", [&] {
    std::size_t inside = 0;
    for (const auto& r : rows) inside += r.psi_max <= pi;
    load_endpoints(rows.empty() ? std::nan("") : static_cast<double>(inside) / static_cast<double>(rows.size()));
  });
  guarded("Inside-hull GDOP p95 <= 4 and outside median above inside", [&] { hull_split_criterion(rows); });
  guarded("Per-L empirical psi_max vs Stevens CDF (KS < 0.015, >= 1e4 samples)", per_l_cdf_agreement);

  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
