#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace psimax {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double field_double(std::string_view f, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    fail(Errc::schema, "results line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
  }
  return v;
}

std::uint64_t field_uint(std::string_view f, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    fail(Errc::schema, "results line " + std::to_string(line_no) + ": bad integer '" + std::string(f) + "'");
  }
  return v;
}

}  // namespace

void append_double(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::string format_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

std::string schema_line(std::string_view kind) {
  return "# psimax " + std::string(kind) + " schema_version=" + std::to_string(kSchemaVersion);
}

std::ofstream open_csv(const std::filesystem::path& dir, std::string_view name,
                       std::string_view kind, std::string_view header) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / std::string(name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  out << schema_line(kind) << '\n' << header << '\n';
  return out;
}

void append_result_row(std::string& out, const ResultRow& row) {
  out += std::to_string(row.scenario_id);
  out += ',';
  out += std::to_string(row.count);
  out += ',';
  append_double(out, row.psi_max);
  out += ',';
  append_double(out, row.gdop_toa);
  out += ',';
  append_double(out, row.gdop_tdoa);
  out += row.inside_hull ? ",1" : ",0";
  out += row.degenerate ? ",1\n" : ",0\n";
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != schema_line("results")) {
    fail(Errc::schema, path.string() + ": expected '" + schema_line("results") + "'");
  }
  if (!std::getline(in, line) || line != kResultsHeader) {
    fail(Errc::schema, path.string() + ": unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 7) fail(Errc::schema, "results line " + std::to_string(line_no) + ": expected 7 fields");
    ResultRow r;
    r.scenario_id = field_uint(f[0], line_no);
    r.count = static_cast<std::size_t>(field_uint(f[1], line_no));
    r.psi_max = field_double(f[2], line_no);
    r.gdop_toa = field_double(f[3], line_no);
    r.gdop_tdoa = field_double(f[4], line_no);
    r.inside_hull = field_uint(f[5], line_no) != 0;
    r.degenerate = field_uint(f[6], line_no) != 0;
    rows.push_back(r);
  }
  return rows;
}

void write_summary(const std::filesystem::path& dir, std::span<const SummaryEntry> entries) {
  auto out = open_csv(dir, "summary.csv", "summary", kSummaryHeader);
  std::string buf;
  for (const auto& e : entries) {
    buf += e.statistic;
    buf += ',';
    buf += e.arg;
    buf += ',';
    append_double(buf, e.value);
    buf += ',';
    if (!std::isnan(e.std_error)) append_double(buf, e.std_error);
    buf += '\n';
  }
  out << buf;
  if (!out) fail(Errc::io, "failed writing summary.csv");
}

void write_curves(const std::filesystem::path& dir, std::span<const CurvePoint> points) {
  auto out = open_csv(dir, "curves.csv", "curves", kCurvesHeader);
  std::string buf;
  for (const auto& p : points) {
    buf += p.curve_id;
    buf += ',';
    append_double(buf, p.x);
    buf += ',';
    append_double(buf, p.F);
    buf += '\n';
  }
  out << buf;
  if (!out) fail(Errc::io, "failed writing curves.csv");
}

}  // namespace psimax
