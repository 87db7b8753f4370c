#pragma once

// Versioned CSV files shared with the plotting scripts:
//   results.csv  scenario_id,L,psi_max,gdop_toa,gdop_tdoa,inside_hull,degenerate_flag
//   summary.csv  statistic,arg,value,std_error
//   curves.csv   curve_id,x,F
// Each file starts with "# psimax <kind> schema_version=<n>".

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psimax {

inline constexpr int kSchemaVersion = 1;

inline constexpr std::string_view kResultsHeader =
    "scenario_id,L,psi_max,gdop_toa,gdop_tdoa,inside_hull,degenerate_flag";
inline constexpr std::string_view kSummaryHeader = "statistic,arg,value,std_error";
inline constexpr std::string_view kCurvesHeader = "curve_id,x,F";

struct ResultRow {
  std::uint64_t scenario_id = 0;
  std::size_t count = 0;
  double psi_max = 0.0;
  double gdop_toa = 0.0;
  double gdop_tdoa = 0.0;
  bool inside_hull = false;
  bool degenerate = false;
};

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for specials.
std::string format_double(double v);
void append_double(std::string& out, double v);

std::string schema_line(std::string_view kind);

/// Opens `dir/name` for writing (creating `dir`), writes the schema line and header.
std::ofstream open_csv(const std::filesystem::path& dir, std::string_view name,
                       std::string_view kind, std::string_view header);

void append_result_row(std::string& out, const ResultRow& row);

std::vector<ResultRow> read_results(const std::filesystem::path& path);

struct SummaryEntry {
  std::string statistic;
  std::string arg;
  double value = 0.0;
  double std_error = 0.0;  // NaN = not applicable, written as an empty field
};

void write_summary(const std::filesystem::path& dir, std::span<const SummaryEntry> entries);

struct CurvePoint {
  std::string curve_id;
  double x = 0.0;
  double F = 0.0;
};

void write_curves(const std::filesystem::path& dir, std::span<const CurvePoint> points);

}  // namespace psimax
