#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "analytic_dist.hpp"
#include "angular_geometry.hpp"
#include "error.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace psimax {

namespace {

constexpr std::size_t kScenarioBlock = 1024;
constexpr std::size_t kBlocksPerWorker = 4;
constexpr std::size_t kCurveMaxCount = 8;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct BlockOutput {
  std::vector<ResultRow> rows;
  std::vector<std::uint64_t> hist;
};

double binomial_se(double p, double n) { return n > 0 ? std::sqrt(p * (1.0 - p) / n) : kNaN; }

std::string count_label(std::size_t l, bool at_least) {
  return (at_least ? "L>=" : "L=") + std::to_string(l);
}

std::string count_tag(std::size_t l, bool at_least) {
  return (at_least ? "Lge" : "L") + std::to_string(l);
}

std::vector<std::uint64_t> cumulate(std::vector<std::uint64_t> v) {
  for (std::size_t k = 1; k < v.size(); ++k) v[k] += v[k - 1];
  return v;
}

}  // namespace

std::optional<ResultRow> evaluate_scenario(const NetworkParams& params, std::uint64_t scenario_id,
                                           std::size_t l_min, std::size_t* hearable_count) {
  const auto s = sample_scenario(params, scenario_id);
  if (hearable_count) *hearable_count = s.hearable.size();
  if (s.hearable.size() < l_min) return std::nullopt;

  std::vector<Point2> points;
  points.reserve(s.hearable.size());
  for (std::size_t idx : s.hearable) points.push_back(s.positions[idx]);
  const auto angles = AngleSet::from_points(points);
  // Strongest BS (hearable[0]) is the TDOA reference.
  const auto rec = evaluate_geometry(angles, angles.position_of(0));

  ResultRow row;
  row.scenario_id = scenario_id;
  row.count = rec.count;
  row.psi_max = rec.psi_max;
  row.gdop_toa = rec.gdop_toa;
  row.gdop_tdoa = rec.gdop_tdoa;
  row.inside_hull = rec.inside_hull;
  row.degenerate = rec.degenerate;
  return row;
}

double SimulationSummary::p_psi_at_most(std::size_t k) const {
  return rows > 0 ? static_cast<double>(psi_at_most[k]) / static_cast<double>(rows) : kNaN;
}

double SimulationSummary::p_inside_hull() const {
  return rows > 0 ? static_cast<double>(inside_hull) / static_cast<double>(rows) : kNaN;
}

std::vector<SummaryEntry> SimulationSummary::entries() const {
  std::vector<SummaryEntry> e;
  const double n = static_cast<double>(n_scenarios);
  const double r = static_cast<double>(rows);
  e.push_back({"n_scenarios", "", n, kNaN});
  e.push_back({"l_min", "", static_cast<double>(l_min), kNaN});
  e.push_back({"result_rows", "", r, kNaN});
  for (const auto& h : hearability.rows) {
    e.push_back({"hearability_pmf", std::to_string(h.count), h.probability, h.std_error});
  }
  const double p_ge = hearability.probability_at_least(l_min);
  e.push_back({"p_n_ge_lmin", std::to_string(l_min), p_ge, binomial_se(p_ge, n)});
  for (std::size_t k = 0; k < phi_grid.size(); ++k) {
    const double p = p_psi_at_most(k);
    e.push_back({"psi_cdf_given_n_ge_lmin", format_double(phi_grid[k]), p, binomial_se(p, r)});
  }
  const double pin = p_inside_hull();
  e.push_back({"inside_hull_given_n_ge_lmin", "", pin, binomial_se(pin, r)});
  e.push_back({"degenerate_rows", "", static_cast<double>(degenerate), kNaN});
  return e;
}

std::vector<CurvePoint> SimulationSummary::curves() const {
  std::vector<CurvePoint> out;
  for (const auto& [count, total] : rows_by_count) {
    const auto it = psi_at_most_by_count.find(count);
    if (it == psi_at_most_by_count.end() || total == 0) continue;
    const std::string id = "empirical_psi_" + count_tag(count, false);
    for (std::size_t k = 0; k < phi_grid.size(); ++k) {
      out.push_back({id, phi_grid[k], static_cast<double>(it->second[k]) / static_cast<double>(total)});
    }
  }
  if (rows > 0) {
    const std::string id = "empirical_psi_" + count_tag(l_min, true);
    for (std::size_t k = 0; k < phi_grid.size(); ++k) out.push_back({id, phi_grid[k], p_psi_at_most(k)});
  }
  return out;
}

std::string SimulationSummary::text() const {
  std::ostringstream os;
  os << "scenarios: " << n_scenarios << "\n";
  os << "rows with N >= " << l_min << ": " << rows << "\n";
  os << "P(N >= " << l_min << "): " << hearability.probability_at_least(l_min) << "\n";
  os << "hearability pmf:";
  for (const auto& h : hearability.rows) os << " " << h.count << ":" << h.probability;
  os << "\n";
  if (rows > 0) {
    os << "P(psi_max < pi | N >= " << l_min << ") [inside hull]: " << p_inside_hull() << "\n";
    os << "degenerate rows: " << degenerate << "\n";
  }
  return os.str();
}

SimulationSummary simulate(const ExperimentConfig& config, const RowSink& sink) {
  config.validate();
  const auto& grid = config.phi_grid;
  const std::size_t n = config.n_scenarios;
  const std::size_t n_blocks = (n + kScenarioBlock - 1) / kScenarioBlock;
  const unsigned workers = resolve_threads(config.threads);
  const std::size_t wave = std::max<std::size_t>(1, workers * kBlocksPerWorker);

  SimulationSummary sum;
  sum.n_scenarios = n;
  sum.l_min = config.l_min;
  sum.phi_grid = grid;
  std::vector<std::uint64_t> first_at(grid.size() + 1, 0);  // first grid index with phi >= psi
  std::map<std::size_t, std::vector<std::uint64_t>> first_at_by_count;
  std::vector<std::uint64_t> hist(1, 0);

  for (std::size_t w0 = 0; w0 < n_blocks; w0 += wave) {
    const std::size_t nb = std::min(wave, n_blocks - w0);
    std::vector<BlockOutput> outs(nb);
    parallel_blocks(nb, config.threads, [&](std::size_t b) {
      auto& out = outs[b];
      const std::size_t begin = (w0 + b) * kScenarioBlock;
      const std::size_t end = std::min(n, begin + kScenarioBlock);
      for (std::size_t id = begin; id < end; ++id) {
        std::size_t heard = 0;
        auto row = evaluate_scenario(config.network, id, config.l_min, &heard);
        if (out.hist.size() <= heard) out.hist.resize(heard + 1, 0);
        ++out.hist[heard];
        if (row) out.rows.push_back(*row);
      }
    });
    for (auto& out : outs) {
      if (hist.size() < out.hist.size()) hist.resize(out.hist.size(), 0);
      for (std::size_t l = 0; l < out.hist.size(); ++l) hist[l] += out.hist[l];
      for (const auto& row : out.rows) {
        ++sum.rows;
        if (row.inside_hull) ++sum.inside_hull;
        if (row.degenerate) ++sum.degenerate;
        const auto k = static_cast<std::size_t>(
            std::lower_bound(grid.begin(), grid.end(), row.psi_max) - grid.begin());
        ++first_at[k];
        ++sum.rows_by_count[row.count];
        if (row.count <= kCurveMaxCount) {
          auto& f = first_at_by_count[row.count];
          if (f.empty()) f.assign(grid.size() + 1, 0);
          ++f[k];
        }
      }
      if (sink && !out.rows.empty()) sink(out.rows);
    }
  }

  sum.hearability = hearability_from_counts(hist, n);
  sum.psi_at_most = cumulate(first_at);
  sum.psi_at_most.resize(grid.size());
  for (auto& [count, f] : first_at_by_count) {
    auto c = cumulate(f);
    c.resize(grid.size());
    sum.psi_at_most_by_count[count] = std::move(c);
  }
  return sum;
}

SimulationSummary run_simulation(const ExperimentConfig& config) {
  config.validate();
  auto out = open_csv(config.output_dir, "results.csv", "results", kResultsHeader);
  std::string buf;
  const auto summary = simulate(config, [&](std::span<const ResultRow> rows) {
    buf.clear();
    for (const auto& r : rows) append_result_row(buf, r);
    out << buf;
    if (!out) fail(Errc::io, "failed writing results.csv");
  });
  out.close();
  if (!out) fail(Errc::io, "failed writing results.csv");
  const auto entries = summary.entries();
  write_summary(config.output_dir, entries);
  const auto curves = summary.curves();
  write_curves(config.output_dir, curves);
  return summary;
}

std::vector<ResultRow> collect_rows(const ExperimentConfig& config, SimulationSummary* summary) {
  std::vector<ResultRow> rows;
  auto s = simulate(config, [&](std::span<const ResultRow> block) {
    rows.insert(rows.end(), block.begin(), block.end());
  });
  if (summary) *summary = std::move(s);
  return rows;
}

void append_curve(std::vector<CurvePoint>& out, const std::string& curve_id,
                  const DistributionTable& table) {
  for (std::size_t i = 0; i < table.x.size(); ++i) out.push_back({curve_id, table.x[i], table.F[i]});
}

// ---------------------------------------------------------------- correlation

CorrelationReport correlate_rows(std::span<const ResultRow> rows, std::size_t l_min,
                                 std::span<const double> psi_bin_edges) {
  CorrelationReport rep;
  struct Selector {
    std::size_t count;
    bool at_least;
  };
  const Selector selectors[] = {{l_min, false}, {l_min + 1, false}, {l_min + 2, false}, {l_min, true}};
  for (const auto& sel : selectors) {
    CorrelationBin bin;
    bin.label = count_label(sel.count, sel.at_least);
    std::vector<double> psi, gdop;
    for (const auto& r : rows) {
      if (sel.at_least ? r.count >= sel.count : r.count == sel.count) {
        psi.push_back(r.psi_max);
        gdop.push_back(r.gdop_tdoa);
      }
    }
    bin.rows = psi.size();
    if (bin.rows >= kMinRowsPerBin) {
      try {
        bin.spearman = spearman_rho(psi, gdop);
        const auto lin = pearson_r(psi, gdop, false);
        const auto lg = pearson_r(psi, gdop, true);
        bin.pearson_gdop = lin.r;
        bin.pearson_log_gdop = lg.r;
        bin.excluded_infinite = lin.excluded;
        bin.available = true;
      } catch (const Error& e) {
        if (e.code() != Errc::undefined_correlation) throw;
      }
    }
    rep.bins.push_back(bin);
  }

  rep.psi_bin_edges.assign(psi_bin_edges.begin(), psi_bin_edges.end());
  const std::size_t nbins = psi_bin_edges.size() - 1;
  std::vector<std::vector<double>> by_bin(nbins);
  for (const auto& r : rows) {
    if (r.count < l_min) continue;
    for (std::size_t k = 0; k < nbins; ++k) {
      const bool last = k + 1 == nbins;
      if (r.psi_max >= psi_bin_edges[k] &&
          (r.psi_max < psi_bin_edges[k + 1] || (last && r.psi_max == psi_bin_edges[k + 1]))) {
        by_bin[k].push_back(r.gdop_tdoa);
        break;
      }
    }
  }
  for (std::size_t k = 0; k < nbins; ++k) {
    rep.psi_bin_rows.push_back(by_bin[k].size());
    bool has_finite = std::any_of(by_bin[k].begin(), by_bin[k].end(), [](double v) { return std::isfinite(v); });
    if (has_finite) append_curve(rep.curves, "gdop_tdoa_psi_bin" + std::to_string(k), ecdf(by_bin[k]));
  }
  return rep;
}

std::vector<SummaryEntry> CorrelationReport::entries() const {
  std::vector<SummaryEntry> e;
  for (const auto& b : bins) {
    e.push_back({"correlation_rows", b.label, static_cast<double>(b.rows), kNaN});
    e.push_back({"spearman_rho", b.label, b.available ? b.spearman : kNaN, kNaN});
    e.push_back({"pearson_gdop", b.label, b.available ? b.pearson_gdop : kNaN, kNaN});
    e.push_back({"pearson_log_gdop", b.label, b.available ? b.pearson_log_gdop : kNaN, kNaN});
    e.push_back({"excluded_infinite_gdop", b.label, static_cast<double>(b.excluded_infinite), kNaN});
  }
  for (std::size_t k = 0; k < psi_bin_edges.size(); ++k) {
    e.push_back({"psi_bin_edge", std::to_string(k), psi_bin_edges[k], kNaN});
  }
  for (std::size_t k = 0; k < psi_bin_rows.size(); ++k) {
    e.push_back({"psi_bin_rows", std::to_string(k), static_cast<double>(psi_bin_rows[k]), kNaN});
  }
  return e;
}

std::string CorrelationReport::text() const {
  std::ostringstream os;
  os << "bin      rows  spearman  pearson(GDOP)  pearson(log GDOP)  excluded\n";
  for (const auto& b : bins) {
    os << b.label << std::string(b.label.size() < 8 ? 8 - b.label.size() : 1, ' ') << " " << b.rows;
    if (b.available) {
      os << "  " << b.spearman << "  " << b.pearson_gdop << "  " << b.pearson_log_gdop << "  "
         << b.excluded_infinite << "\n";
    } else {
      os << "  unavailable (< " << kMinRowsPerBin << " rows or zero variance)\n";
    }
  }
  return os.str();
}

CorrelationReport run_correlation(const ExperimentConfig& config,
                                  const std::optional<std::filesystem::path>& results) {
  config.validate();
  std::vector<ResultRow> rows;
  if (results) {
    rows = read_results(*results);
  } else {
    run_simulation(config);
    rows = read_results(config.output_dir / "results.csv");
  }
  auto rep = correlate_rows(rows, config.l_min, config.psi_bin_edges);
  write_summary(config.output_dir, rep.entries());
  write_curves(config.output_dir, rep.curves);
  return rep;
}

// ----------------------------------------------------------------- hull split

HullSplitReport hull_split_rows(std::span<const ResultRow> rows, std::size_t l_min) {
  HullSplitReport rep;
  for (bool at_least : {false, true}) {
    HullSplitReport::Stats st;
    st.label = count_label(l_min, at_least);
    std::vector<double> inside, outside;
    for (const auto& r : rows) {
      if (at_least ? r.count < l_min : r.count != l_min) continue;
      if (r.degenerate) {
        ++st.degenerate_rows;
      } else if (r.inside_hull) {
        inside.push_back(r.gdop_tdoa);
      } else {
        outside.push_back(r.gdop_tdoa);
      }
    }
    st.inside_rows = inside.size();
    st.outside_rows = outside.size();
    const double total = static_cast<double>(inside.size() + outside.size());
    st.outside_fraction = total > 0 ? static_cast<double>(outside.size()) / total : kNaN;
    st.inside_p95 = inside.empty() ? kNaN : quantile(inside, 0.95);
    st.inside_median = inside.empty() ? kNaN : quantile(inside, 0.5);
    st.outside_median = outside.empty() ? kNaN : quantile(outside, 0.5);
    const auto tag = count_tag(l_min, at_least);
    const auto has_finite = [](const std::vector<double>& v) {
      return std::any_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (has_finite(inside)) append_curve(rep.curves, "gdop_tdoa_inside_" + tag, ecdf(inside));
    if (has_finite(outside)) append_curve(rep.curves, "gdop_tdoa_outside_" + tag, ecdf(outside));
    rep.groups.push_back(st);
  }
  return rep;
}

std::vector<SummaryEntry> HullSplitReport::entries() const {
  std::vector<SummaryEntry> e;
  for (const auto& g : groups) {
    e.push_back({"inside_rows", g.label, static_cast<double>(g.inside_rows), kNaN});
    e.push_back({"outside_rows", g.label, static_cast<double>(g.outside_rows), kNaN});
    e.push_back({"degenerate_rows", g.label, static_cast<double>(g.degenerate_rows), kNaN});
    e.push_back({"outside_fraction", g.label, g.outside_fraction, kNaN});
    e.push_back({"inside_gdop_p95", g.label, g.inside_p95, kNaN});
    e.push_back({"inside_gdop_median", g.label, g.inside_median, kNaN});
    e.push_back({"outside_gdop_median", g.label, g.outside_median, kNaN});
  }
  return e;
}

std::string HullSplitReport::text() const {
  std::ostringstream os;
  for (const auto& g : groups) {
    os << g.label << ": inside " << g.inside_rows << " rows, outside " << g.outside_rows << " rows";
    if (g.inside_rows > 0) os << ", inside p95 GDOP " << g.inside_p95 << ", inside median " << g.inside_median;
    if (g.outside_rows > 0) os << ", outside median " << g.outside_median;
    if (g.inside_rows == 0 || g.outside_rows == 0) os << " (a condition bin is unavailable)";
    os << "\n";
  }
  return os.str();
}

HullSplitReport run_hull_split(const ExperimentConfig& config,
                               const std::optional<std::filesystem::path>& results) {
  config.validate();
  std::vector<ResultRow> rows;
  if (results) {
    rows = read_results(*results);
  } else {
    run_simulation(config);
    rows = read_results(config.output_dir / "results.csv");
  }
  auto rep = hull_split_rows(rows, config.l_min);
  write_summary(config.output_dir, rep.entries());
  write_curves(config.output_dir, rep.curves);
  return rep;
}

// ------------------------------------------------------------------- analytic

AnalyticReport run_analytic(const ExperimentConfig& config) {
  config.validate();
  AnalyticReport rep;
  std::ostringstream os;
  const auto& grid = config.phi_grid;

  for (std::size_t l = 3; l <= kCurveMaxCount; ++l) {
    const std::string id = "stevens_L" + std::to_string(l);
    for (double phi : grid) rep.curves.push_back({id, phi, stevens_cdf(l, phi)});
  }

  struct Variant {
    std::string suffix;
    NetworkParams params;
  };
  std::vector<Variant> variants;
  if (config.sweep) {
    for (double v : config.sweep->values) {
      variants.push_back({std::string(to_string(config.sweep->param)) + "=" + format_double(v),
                          apply_sweep(config.network, config.sweep->param, v)});
    }
  } else {
    variants.push_back({"", config.network});
  }

  const std::string base_id = "weighted_" + count_tag(config.l_min, true);
  for (const auto& var : variants) {
    const auto table = empirical_hearability(var.params, config.n_scenarios, config.threads);
    const auto pmf = table.pmf();
    const std::string arg = var.suffix.empty() ? std::to_string(config.l_min) : var.suffix;
    const double p_ge = table.probability_at_least(config.l_min);
    rep.entries.push_back({"p_n_ge_lmin", arg, p_ge,
                           binomial_se(p_ge, static_cast<double>(config.n_scenarios))});
    if (!(p_ge > 0.0)) {
      rep.entries.push_back({"weighted_cdf_at_pi", arg, kNaN, kNaN});
      os << "weighted CDF " << (var.suffix.empty() ? "" : var.suffix + " ")
         << "unavailable: no scenario reached N >= " << config.l_min << "\n";
      continue;
    }
    const std::string id = var.suffix.empty() ? base_id : base_id + "_" + var.suffix;
    double worst_bound = 0.0;
    for (double phi : grid) {
      const auto w = weighted_cdf(phi, pmf, config.l_min);
      worst_bound = std::max(worst_bound, w.truncation_bound);
      rep.curves.push_back({id, phi, w.value});
    }
    const auto at_pi = weighted_cdf(std::numbers::pi, pmf, config.l_min);
    rep.entries.push_back({"weighted_cdf_at_pi", arg, at_pi.value, kNaN});
    rep.entries.push_back({"weighted_truncation_bound", arg, worst_bound, kNaN});
    os << "P(psi_max <= pi | N >= " << config.l_min << ")"
       << (var.suffix.empty() ? "" : " at " + var.suffix) << ": " << at_pi.value
       << "  (P(N >= " << config.l_min << ") = " << p_ge << ")\n";
  }

  for (double phi : grid) {
    if (!(phi < kTwoPi)) continue;
    const auto e = expected_bs_for_target(phi);
    const std::string arg = format_double(phi);
    rep.entries.push_back({"expected_bs", arg, e.value,
                           e.method == ExpectedBsMethod::oracle ? e.oracle_std_error : kNaN});
    if (e.warning) rep.entries.push_back({"expected_bs_warning", arg, 1.0, kNaN});
  }
  rep.text = os.str();
  return rep;
}

}  // namespace psimax
