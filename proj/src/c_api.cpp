#include "psimax/psimax.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <new>
#include <string>
#include <vector>

#include "analytic_dist.hpp"
#include "angular_geometry.hpp"
#include "config.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "ppp_network.hpp"
#include "stats.hpp"

struct psimax_scenario {
  psimax::NetworkParams params;
  psimax::Scenario scenario;
};

struct psimax_experiment {
  psimax::ExperimentConfig config;
  std::string report;
};

namespace {

thread_local std::string g_last_error;

psimax_status to_status(psimax::Errc code) {
  return static_cast<psimax_status>(static_cast<int>(code));
}

template <typename F>
psimax_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return PSIMAX_OK;
  } catch (const psimax::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PSIMAX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PSIMAX_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PSIMAX_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) psimax::fail(psimax::Errc::invalid_argument, what);
}

psimax::AngleSet angle_set(const double* bearings, size_t n) {
  require(bearings != nullptr || n == 0, "bearings is NULL");
  return psimax::AngleSet::from_bearings({bearings, n});
}

psimax::NetworkParams to_params(const psimax_network_params* p) {
  require(p != nullptr, "params is NULL");
  psimax::NetworkParams out;
  out.lambda = p->lambda;
  out.load = p->load;
  out.alpha = p->alpha;
  out.beta_over_gamma_db = p->beta_over_gamma_db;
  out.sigma_s_db = p->sigma_s_db;
  out.sigma2 = p->sigma2;
  out.tx_power = p->tx_power;
  out.window_radius = p->window_radius;
  out.seed = p->seed;
  switch (p->candidates) {
    case PSIMAX_CANDIDATES_ALL: out.candidates = psimax::CandidatePolicy::all_bs; break;
    case PSIMAX_CANDIDATES_ACTIVE: out.candidates = psimax::CandidatePolicy::active_only; break;
    default: psimax::fail(psimax::Errc::invalid_argument, "unknown candidate policy");
  }
  out.validate();
  return out;
}

}  // namespace

extern "C" {

const char* psimax_status_string(psimax_status status) {
  switch (status) {
    case PSIMAX_OK: return "ok";
    case PSIMAX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PSIMAX_ERR_DEGENERATE_INPUT: return "degenerate input";
    case PSIMAX_ERR_INSUFFICIENT_GEOMETRY: return "insufficient geometry";
    case PSIMAX_ERR_DOMAIN: return "domain error";
    case PSIMAX_ERR_UNDEFINED_CONDITIONAL: return "undefined conditional";
    case PSIMAX_ERR_UNDEFINED_CORRELATION: return "undefined correlation";
    case PSIMAX_ERR_IO: return "i/o error";
    case PSIMAX_ERR_CONFIG: return "configuration error";
    case PSIMAX_ERR_SCHEMA: return "schema mismatch";
    case PSIMAX_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* psimax_last_error_message(void) { return g_last_error.c_str(); }

const char* psimax_version(void) { return "1.0.0"; }

psimax_status psimax_parse_angle(const char* text, double* out) {
  return guarded([&] {
    require(text && out, "NULL pointer");
    *out = psimax::parse_angle(text, "angle");
  });
}

psimax_status psimax_bearings_from_points(const double* xy, size_t n_points, double* bearings_out) {
  return guarded([&] {
    require((xy && bearings_out) || n_points == 0, "NULL pointer");
    std::vector<psimax::Point2> pts(n_points);
    for (size_t i = 0; i < n_points; ++i) pts[i] = {xy[2 * i], xy[2 * i + 1]};
    const auto set = psimax::AngleSet::from_points(pts);
    const auto b = set.bearings();
    const auto src = set.source_index();
    for (size_t k = 0; k < b.size(); ++k) bearings_out[src[k]] = b[k];
  });
}

psimax_status psimax_psi_max(const double* bearings, size_t n, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::psi_max(angle_set(bearings, n));
  });
}

psimax_status psimax_gdop_toa(const double* bearings, size_t n, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::gdop_toa_matrix(angle_set(bearings, n));
  });
}

psimax_status psimax_gdop_toa_anglesum(const double* bearings, size_t n, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::gdop_toa_anglesum(angle_set(bearings, n));
  });
}

psimax_status psimax_gdop_bound(size_t count, double psi_max, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::gdop_bound(count, psi_max);
  });
}

psimax_status psimax_gdop_tdoa(const double* bearings, size_t n, size_t reference, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    require(reference < n, "reference index out of range");
    const auto set = angle_set(bearings, n);
    *out = psimax::gdop_tdoa(set, set.position_of(reference));
  });
}

psimax_status psimax_crlb_from_gdop(double gdop, double sigma_r, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::crlb_from_gdop(gdop, sigma_r);
  });
}

psimax_status psimax_inside_convex_hull(const double* bearings, size_t n, int* inside, int* degenerate) {
  return guarded([&] {
    require(inside, "inside is NULL");
    const auto h = psimax::inside_convex_hull(angle_set(bearings, n));
    *inside = h.inside ? 1 : 0;
    if (degenerate) *degenerate = h.degenerate ? 1 : 0;
  });
}

psimax_status psimax_stevens_cdf(size_t count, double phi, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::stevens_cdf(count, phi);
  });
}

psimax_status psimax_weighted_cdf(double phi, const double* pmf, size_t pmf_len, size_t l_min,
                                  double* out, double* truncation_bound) {
  return guarded([&] {
    require(out, "out is NULL");
    require(pmf || pmf_len == 0, "pmf is NULL");
    const auto w = psimax::weighted_cdf(phi, {pmf, pmf_len}, l_min);
    *out = w.value;
    if (truncation_bound) *truncation_bound = w.truncation_bound;
  });
}

psimax_status psimax_expected_bs_for_target(double phi, size_t oracle_runs, uint64_t oracle_seed,
                                            psimax_expected_bs* out) {
  return guarded([&] {
    require(out, "out is NULL");
    psimax::ExpectedBsOptions opt;
    opt.oracle_runs = oracle_runs;
    opt.oracle_seed = oracle_seed;
    const auto e = psimax::expected_bs_for_target(phi, opt);
    out->value = e.value;
    out->used_oracle = e.method == psimax::ExpectedBsMethod::oracle ? 1 : 0;
    out->warning = e.warning ? 1 : 0;
    out->analytic = e.analytic;
    out->oracle = e.oracle;
    out->oracle_std_error = e.oracle_std_error;
  });
}

psimax_status psimax_spearman(const double* x, const double* y, size_t n, double* out) {
  return guarded([&] {
    require(out && ((x && y) || n == 0), "NULL pointer");
    *out = psimax::spearman_rho({x, n}, {y, n});
  });
}

psimax_status psimax_pearson(const double* x, const double* y, size_t n, int log_transform_y,
                             double* out, size_t* excluded) {
  return guarded([&] {
    require(out && ((x && y) || n == 0), "NULL pointer");
    const auto r = psimax::pearson_r({x, n}, {y, n}, log_transform_y != 0);
    *out = r.r;
    if (excluded) *excluded = r.excluded;
  });
}

psimax_status psimax_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* out) {
  return guarded([&] {
    require(out && (a || na == 0) && (b || nb == 0), "NULL pointer");
    require(na > 0 && nb > 0, "both samples must be non-empty");
    *out = psimax::ks_distance(psimax::ecdf({a, na}), psimax::ecdf({b, nb}));
  });
}

psimax_status psimax_quantile(const double* values, size_t n, double p, double* out) {
  return guarded([&] {
    require(out && (values || n == 0), "NULL pointer");
    *out = psimax::quantile({values, n}, p);
  });
}

void psimax_network_params_default(psimax_network_params* params) {
  if (!params) return;
  const psimax::NetworkParams d;
  params->lambda = d.lambda;
  params->load = d.load;
  params->alpha = d.alpha;
  params->beta_over_gamma_db = d.beta_over_gamma_db;
  params->sigma_s_db = d.sigma_s_db;
  params->sigma2 = d.sigma2;
  params->tx_power = d.tx_power;
  params->window_radius = d.window_radius;
  params->seed = d.seed;
  params->candidates = PSIMAX_CANDIDATES_ALL;
}

psimax_status psimax_shadowing_transformed_density(const psimax_network_params* params, double* out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = psimax::shadowing_transformed_density(to_params(params));
  });
}

psimax_status psimax_scenario_sample(const psimax_network_params* params, uint64_t scenario_id,
                                     psimax_scenario** out) {
  return guarded([&] {
    require(out, "out is NULL");
    auto p = to_params(params);
    auto s = psimax::sample_scenario(p, scenario_id);
    *out = new psimax_scenario{p, std::move(s)};
  });
}

void psimax_scenario_destroy(psimax_scenario* scenario) { delete scenario; }

size_t psimax_scenario_size(const psimax_scenario* scenario) {
  return scenario ? scenario->scenario.size() : 0;
}

size_t psimax_scenario_hearable_count(const psimax_scenario* scenario) {
  return scenario ? scenario->scenario.hearable.size() : 0;
}

size_t psimax_scenario_hearable(const psimax_scenario* scenario, size_t* out, size_t capacity) {
  if (!scenario || !out) return 0;
  const auto& h = scenario->scenario.hearable;
  const size_t n = std::min(capacity, h.size());
  for (size_t i = 0; i < n; ++i) out[i] = h[i];
  return n;
}

psimax_status psimax_scenario_bs(const psimax_scenario* scenario, size_t index, double* x, double* y,
                                 double* shadowing, int* active) {
  return guarded([&] {
    require(scenario, "scenario is NULL");
    const auto& s = scenario->scenario;
    require(index < s.size(), "BS index out of range");
    if (x) *x = s.positions[index].x;
    if (y) *y = s.positions[index].y;
    if (shadowing) *shadowing = s.shadowing[index];
    if (active) *active = s.active[index] ? 1 : 0;
  });
}

psimax_status psimax_scenario_sinr(const psimax_scenario* scenario, size_t index, double* out) {
  return guarded([&] {
    require(scenario && out, "NULL pointer");
    require(index < scenario->scenario.size(), "BS index out of range");
    *out = psimax::sinr(scenario->scenario, scenario->params, index);
  });
}

psimax_status psimax_empirical_hearability(const psimax_network_params* params, size_t n_scenarios,
                                           unsigned threads, double* pmf_out, size_t capacity,
                                           size_t* len_out) {
  return guarded([&] {
    require(pmf_out || capacity == 0, "pmf_out is NULL");
    require(n_scenarios > 0, "n_scenarios must be >= 1");
    const auto t = psimax::empirical_hearability(to_params(params), n_scenarios, threads);
    const auto pmf = t.pmf();
    for (size_t l = 0; l < capacity; ++l) pmf_out[l] = l < pmf.size() ? pmf[l] : 0.0;
    if (len_out) *len_out = pmf.size();
  });
}

psimax_status psimax_experiment_create(psimax_experiment** out) {
  return guarded([&] {
    require(out, "out is NULL");
    *out = new psimax_experiment{};
  });
}

void psimax_experiment_destroy(psimax_experiment* experiment) { delete experiment; }

psimax_status psimax_experiment_load_config(psimax_experiment* experiment, const char* path) {
  return guarded([&] {
    require(experiment && path, "NULL pointer");
    std::ifstream in(path);
    if (!in) psimax::fail(psimax::Errc::io, std::string("cannot open config file ") + path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto cfg = experiment->config;
    psimax::apply_config_text(cfg, text, path);
    experiment->config = std::move(cfg);
  });
}

psimax_status psimax_experiment_set(psimax_experiment* experiment, const char* key, const char* value) {
  return guarded([&] {
    require(experiment && key && value, "NULL pointer");
    psimax::apply_setting(experiment->config, key, value);
  });
}

psimax_status psimax_experiment_simulate(psimax_experiment* experiment) {
  return guarded([&] {
    require(experiment, "experiment is NULL");
    experiment->report = psimax::run_simulation(experiment->config).text();
  });
}

psimax_status psimax_experiment_correlate(psimax_experiment* experiment, const char* results_path) {
  return guarded([&] {
    require(experiment, "experiment is NULL");
    std::optional<std::filesystem::path> p;
    if (results_path) p = results_path;
    experiment->report = psimax::run_correlation(experiment->config, p).text();
  });
}

psimax_status psimax_experiment_hull_split(psimax_experiment* experiment, const char* results_path) {
  return guarded([&] {
    require(experiment, "experiment is NULL");
    std::optional<std::filesystem::path> p;
    if (results_path) p = results_path;
    experiment->report = psimax::run_hull_split(experiment->config, p).text();
  });
}

psimax_status psimax_experiment_analytic(psimax_experiment* experiment) {
  return guarded([&] {
    require(experiment, "experiment is NULL");
    auto rep = psimax::run_analytic(experiment->config);
    psimax::write_summary(experiment->config.output_dir, rep.entries);
    psimax::write_curves(experiment->config.output_dir, rep.curves);
    experiment->report = std::move(rep.text);
  });
}

const char* psimax_experiment_report(const psimax_experiment* experiment) {
  return experiment ? experiment->report.c_str() : "";
}

}  // extern "C"
