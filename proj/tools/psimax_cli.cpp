// Command-line front end. Everything goes through the C interface.

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psimax/psimax.h"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scenarios;
  std::optional<std::string> threads;
  std::optional<std::string> out;
};

struct ExperimentDeleter {
  void operator()(psimax_experiment* e) const { psimax_experiment_destroy(e); }
};
using ExperimentPtr = std::unique_ptr<psimax_experiment, ExperimentDeleter>;

int report_failure(psimax_status s) {
  std::fprintf(stderr, "psimax: %s: %s\n", psimax_status_string(s), psimax_last_error_message());
  switch (s) {
    case PSIMAX_ERR_CONFIG:
    case PSIMAX_ERR_INVALID_ARGUMENT: return 2;
    case PSIMAX_ERR_IO:
    case PSIMAX_ERR_SCHEMA: return 3;
    default: return 1;
  }
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--scenarios", o.scenarios, "number of scenarios (e.g. 100000 or 1e5)");
  cmd->add_option("--threads", o.threads, "worker threads or 'auto'");
  cmd->add_option("--out", o.out, "output directory");
}

// Config file first, then command-line overrides.
psimax_status make_experiment(const CommonOptions& o, ExperimentPtr& out) {
  psimax_experiment* raw = nullptr;
  if (auto s = psimax_experiment_create(&raw); s != PSIMAX_OK) return s;
  out.reset(raw);
  if (!o.config.empty()) {
    if (auto s = psimax_experiment_load_config(raw, o.config.c_str()); s != PSIMAX_OK) return s;
  }
  const auto set = [&](const char* key, const std::string& value) {
    return psimax_experiment_set(raw, key, value.c_str());
  };
  if (o.seed) {
    if (auto s = set("seed", std::to_string(*o.seed)); s != PSIMAX_OK) return s;
  }
  if (o.scenarios) {
    if (auto s = set("n_scenarios", *o.scenarios); s != PSIMAX_OK) return s;
  }
  if (o.threads) {
    if (auto s = set("threads", *o.threads); s != PSIMAX_OK) return s;
  }
  if (o.out) {
    if (auto s = set("output_dir", *o.out); s != PSIMAX_OK) return s;
  }
  return PSIMAX_OK;
}

int run_experiment(const CommonOptions& o, psimax_status (*step)(psimax_experiment*, const char*),
                   const std::optional<std::string>& results) {
  ExperimentPtr exp;
  if (auto s = make_experiment(o, exp); s != PSIMAX_OK) return report_failure(s);
  if (auto s = step(exp.get(), results ? results->c_str() : nullptr); s != PSIMAX_OK) {
    return report_failure(s);
  }
  std::fputs(psimax_experiment_report(exp.get()), stdout);
  return 0;
}

psimax_status simulate_step(psimax_experiment* e, const char*) { return psimax_experiment_simulate(e); }
psimax_status analytic_step(psimax_experiment* e, const char*) { return psimax_experiment_analytic(e); }

int run_expected_bs(const std::vector<std::string>& phis, std::size_t verify_runs, std::uint64_t seed) {
  std::printf("phi,expected_bs,method,analytic,oracle,oracle_std_error,warning\n");
  for (const auto& text : phis) {
    double phi = 0.0;
    if (auto s = psimax_parse_angle(text.c_str(), &phi); s != PSIMAX_OK) return report_failure(s);
    psimax_expected_bs e{};
    if (auto s = psimax_expected_bs_for_target(phi, verify_runs, seed, &e); s != PSIMAX_OK) {
      return report_failure(s);
    }
    std::printf("%.17g,%.10g,%s,%.10g,%.10g,%.3g,%d\n", phi, e.value, e.used_oracle ? "oracle" : "analytic",
                e.analytic, e.oracle, e.oracle_std_error, e.warning);
    if (e.warning) {
      std::fprintf(stderr, "psimax: warning: closed form for phi=%s %s; reporting the simulation estimate\n",
                   text.c_str(), std::isnan(e.analytic) ? "is not evaluable" : "failed the oracle check");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum angular separation of base-station bearings: simulation and closed forms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", psimax_version());

  CommonOptions sim_opts, corr_opts, ana_opts, hull_opts;
  std::optional<std::string> corr_results, hull_results;

  auto* sim = app.add_subcommand("simulate", "run the Monte Carlo and write results/summary/curves CSVs");
  add_common(sim, sim_opts);

  auto* corr = app.add_subcommand("correlate", "psi_max vs TDOA GDOP correlation table");
  add_common(corr, corr_opts);
  corr->add_option("--results", corr_results, "existing results.csv (default: simulate inline)")
      ->check(CLI::ExistingFile);

  auto* ana = app.add_subcommand("analytic", "closed-form and hearability-weighted curves, E[L]");
  add_common(ana, ana_opts);

  auto* hull = app.add_subcommand("hull-split", "TDOA GDOP inside vs outside the BS convex hull");
  add_common(hull, hull_opts);
  hull->add_option("--results", hull_results, "existing results.csv (default: simulate inline)")
      ->check(CLI::ExistingFile);

  std::vector<std::string> phis;
  std::size_t verify_runs = 0;
  std::uint64_t ebs_seed = 1;
  auto* ebs = app.add_subcommand("expected-bs", "expected number of BSs needed to reach psi_max <= phi");
  ebs->add_option("--phi", phis, "target angle(s), e.g. pi/2")->required();
  ebs->add_option("--verify-runs", verify_runs, "stopping-time runs used to check the closed form");
  ebs->add_option("--seed", ebs_seed, "seed for the check");

  CLI11_PARSE(app, argc, argv);

  if (*sim) return run_experiment(sim_opts, simulate_step, std::nullopt);
  if (*corr) return run_experiment(corr_opts, psimax_experiment_correlate, corr_results);
  if (*ana) return run_experiment(ana_opts, analytic_step, std::nullopt);
  if (*hull) return run_experiment(hull_opts, psimax_experiment_hull_split, hull_results);
  if (*ebs) return run_expected_bs(phis, verify_runs, ebs_seed);
  return 1;
}
