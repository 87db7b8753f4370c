#pragma once

// Monte Carlo driver behind the CLI subcommands. Scenarios are evaluated in
// parallel blocks and merged in scenario_id order, so every output depends
// only on the config and seed.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv_io.hpp"
#include "ppp_network.hpp"
#include "stats.hpp"

namespace psimax {

/// Geometry of one scenario's hearable set, or nothing when N < l_min.
std::optional<ResultRow> evaluate_scenario(const NetworkParams& params, std::uint64_t scenario_id,
                                           std::size_t l_min, std::size_t* hearable_count = nullptr);

struct SimulationSummary {
  std::size_t n_scenarios = 0;
  std::size_t l_min = 4;
  HearabilityTable hearability;
  std::vector<double> phi_grid;
  std::uint64_t rows = 0;
  std::uint64_t inside_hull = 0;
  std::uint64_t degenerate = 0;
  std::vector<std::uint64_t> psi_at_most;                       // per phi_grid point
  std::map<std::size_t, std::uint64_t> rows_by_count;           // L -> rows
  std::map<std::size_t, std::vector<std::uint64_t>> psi_at_most_by_count;

  double p_psi_at_most(std::size_t grid_index) const;
  double p_inside_hull() const;
  std::vector<SummaryEntry> entries() const;
  std::vector<CurvePoint> curves() const;
  std::string text() const;
};

using RowSink = std::function<void(std::span<const ResultRow>)>;

/// Runs scenario ids [0, n_scenarios) and feeds rows to `sink` in id order.
SimulationSummary simulate(const ExperimentConfig& config, const RowSink& sink);

/// Writes results.csv, summary.csv and curves.csv into config.output_dir.
SimulationSummary run_simulation(const ExperimentConfig& config);

/// Rows in memory (no files).
std::vector<ResultRow> collect_rows(const ExperimentConfig& config, SimulationSummary* summary = nullptr);

struct CorrelationBin {
  std::string label;  // "L=4", "L>=4"
  std::size_t rows = 0;
  bool available = false;
  double spearman = 0.0;
  double pearson_gdop = 0.0;
  double pearson_log_gdop = 0.0;
  std::size_t excluded_infinite = 0;
};

inline constexpr std::size_t kMinRowsPerBin = 100;

struct CorrelationReport {
  std::vector<CorrelationBin> bins;
  std::vector<double> psi_bin_edges;
  std::vector<std::size_t> psi_bin_rows;
  std::vector<CurvePoint> curves;  // TDOA GDOP ECDF per psi_max bin

  std::vector<SummaryEntry> entries() const;
  std::string text() const;
};

/// Spearman, Pearson(GDOP) and Pearson(log GDOP) between psi_max and TDOA GDOP
/// for L = l_min, l_min+1, l_min+2 and L >= l_min.
CorrelationReport correlate_rows(std::span<const ResultRow> rows, std::size_t l_min,
                                 std::span<const double> psi_bin_edges);

/// Uses `results` when given, otherwise simulates inline (also writing results.csv).
CorrelationReport run_correlation(const ExperimentConfig& config,
                                  const std::optional<std::filesystem::path>& results = std::nullopt);

struct HullSplitGroup {
  std::string label;  // "L=4" or "L>=4"
  std::vector<double> inside;
  std::vector<double> outside;
  std::size_t degenerate = 0;
};

struct HullSplitReport {
  struct Stats {
    std::string label;
    std::size_t inside_rows = 0;
    std::size_t outside_rows = 0;
    std::size_t degenerate_rows = 0;
    double inside_p95 = 0.0;        // NaN when the bin is empty
    double inside_median = 0.0;
    double outside_median = 0.0;
    double outside_fraction = 0.0;
  };
  std::vector<Stats> groups;
  std::vector<CurvePoint> curves;

  std::vector<SummaryEntry> entries() const;
  std::string text() const;
};

HullSplitReport hull_split_rows(std::span<const ResultRow> rows, std::size_t l_min);

HullSplitReport run_hull_split(const ExperimentConfig& config,
                               const std::optional<std::filesystem::path>& results = std::nullopt);

struct AnalyticReport {
  std::vector<CurvePoint> curves;
  std::vector<SummaryEntry> entries;
  std::string text;
};

/// Stevens curves for L = 3..8, hearability-weighted curves from the empirical
/// pmf (one per sweep value when a sweep is configured) and E[L] over the grid.
AnalyticReport run_analytic(const ExperimentConfig& config);

/// Appends `table` to `out` under `curve_id`.
void append_curve(std::vector<CurvePoint>& out, const std::string& curve_id,
                  const DistributionTable& table);

}  // namespace psimax
