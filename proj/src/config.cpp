#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "numeric.hpp"

namespace psimax {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::string_view key) {
  token = trim(token);
  double v = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || token.empty()) {
    fail(Errc::config, "setting '" + std::string(key) + "': cannot parse number '" +
                           std::string(token) + "'");
  }
  return v;
}

}  // namespace

double parse_angle(std::string_view token, std::string_view key) {
  token = trim(token);
  const auto pos = token.find("pi");
  if (pos == std::string_view::npos) return parse_number(token, key);
  double coeff = 1.0;
  double divisor = 1.0;
  auto head = trim(token.substr(0, pos));
  if (!head.empty()) {
    if (head.back() != '*') fail(Errc::config, "setting '" + std::string(key) + "': bad angle '" + std::string(token) + "'");
    coeff = parse_number(head.substr(0, head.size() - 1), key);
  }
  auto tail = trim(token.substr(pos + 2));
  if (!tail.empty()) {
    if (tail.front() != '/') fail(Errc::config, "setting '" + std::string(key) + "': bad angle '" + std::string(token) + "'");
    divisor = parse_number(tail.substr(1), key);
  }
  return coeff * std::numbers::pi / divisor;
}

namespace {

std::size_t parse_count(std::string_view token, std::string_view key) {
  token = trim(token);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    // Allow scientific shorthand such as 1e5 for counts.
    const double d = parse_number(token, key);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e18) {
      fail(Errc::config, "setting '" + std::string(key) + "': expected a count, got '" +
                             std::string(token) + "'");
    }
    return static_cast<std::size_t>(d);
  }
  return v;
}

template <typename Parse>
std::vector<double> parse_list(std::string_view value, std::string_view key, Parse&& parse) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? value.size() - start
                                                                               : comma - start));
    if (item.empty()) fail(Errc::config, "setting '" + std::string(key) + "': empty list item");
    out.push_back(parse(item, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

SweepParam parse_sweep_param(std::string_view v) {
  v = trim(v);
  if (v == "f" || v == "load") return SweepParam::load;
  if (v == "beta_over_gamma_db") return SweepParam::beta_over_gamma_db;
  if (v == "lambda") return SweepParam::lambda;
  fail(Errc::config, "sweep_param must be one of f, beta_over_gamma_db, lambda");
}

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) ==
         v.end();
}

}  // namespace

std::string_view to_string(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::load: return "f";
    case SweepParam::beta_over_gamma_db: return "beta_over_gamma_db";
    case SweepParam::lambda: return "lambda";
  }
  return "?";
}

NetworkParams apply_sweep(const NetworkParams& base, SweepParam param, double value) {
  NetworkParams p = base;
  switch (param) {
    case SweepParam::load: p.load = value; break;
    case SweepParam::beta_over_gamma_db: p.beta_over_gamma_db = value; break;
    case SweepParam::lambda: p.lambda = value; break;
  }
  return p;
}

std::vector<double> default_phi_grid(std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t k = 0; k < points; ++k) {
    g[k] = kTwoPi * static_cast<double>(k + 1) / static_cast<double>(points);
  }
  g.back() = kTwoPi;
  return g;
}

ExperimentConfig::ExperimentConfig()
    : phi_grid(default_phi_grid()),
      psi_bin_edges{0.0, std::numbers::pi / 2.0, std::numbers::pi, 1.5 * std::numbers::pi, kTwoPi} {}

void ExperimentConfig::validate() const {
  try {
    network.validate();
  } catch (const Error& e) {
    fail(Errc::config, e.what());
  }
  if (n_scenarios < 1) fail(Errc::config, "n_scenarios must be >= 1");
  if (l_min < 3) fail(Errc::config, "l_min must be >= 3 (TDOA GDOP and hull need 3 bearings)");
  if (phi_grid.empty()) fail(Errc::config, "phi_grid is empty");
  if (!strictly_increasing(phi_grid)) fail(Errc::config, "phi_grid must be strictly increasing");
  if (!(phi_grid.front() > 0.0) || phi_grid.back() > kTwoPi) {
    fail(Errc::config, "phi_grid values must lie in (0, 2pi]");
  }
  if (psi_bin_edges.size() < 2 || !strictly_increasing(psi_bin_edges)) {
    fail(Errc::config, "psi_bin_edges needs at least 2 strictly increasing values");
  }
  if (sweep) {
    if (sweep->values.empty()) fail(Errc::config, "sweep_values is empty");
    for (double v : sweep->values) {
      try {
        apply_sweep(network, sweep->param, v).validate();
      } catch (const Error& e) {
        fail(Errc::config, "sweep value invalid for " + std::string(to_string(sweep->param)) + ": " +
                               e.what());
      }
    }
  }
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  auto& n = c.network;
  if (key == "lambda") {
    n.lambda = parse_number(value, key);
  } else if (key == "f" || key == "load") {
    n.load = parse_number(value, key);
  } else if (key == "alpha") {
    n.alpha = parse_number(value, key);
  } else if (key == "beta_over_gamma_db") {
    n.beta_over_gamma_db = parse_number(value, key);
  } else if (key == "sigma_s_db") {
    n.sigma_s_db = parse_number(value, key);
  } else if (key == "sigma2") {
    n.sigma2 = parse_number(value, key);
  } else if (key == "tx_power") {
    n.tx_power = parse_number(value, key);
  } else if (key == "window_radius") {
    n.window_radius = parse_number(value, key);
  } else if (key == "seed") {
    std::uint64_t s = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
      fail(Errc::config, "seed must be an unsigned 64-bit integer");
    }
    n.seed = s;
  } else if (key == "candidates") {
    if (value == "all") {
      n.candidates = CandidatePolicy::all_bs;
    } else if (value == "active") {
      n.candidates = CandidatePolicy::active_only;
    } else {
      fail(Errc::config, "candidates must be 'all' or 'active'");
    }
  } else if (key == "n_scenarios" || key == "scenarios") {
    c.n_scenarios = parse_count(value, key);
  } else if (key == "l_min") {
    c.l_min = parse_count(value, key);
  } else if (key == "phi_grid_points") {
    const auto points = parse_count(value, key);
    if (points == 0) fail(Errc::config, "phi_grid_points must be >= 1");
    c.phi_grid = default_phi_grid(points);
  } else if (key == "phi_grid") {
    c.phi_grid = parse_list(value, key, parse_angle);
  } else if (key == "psi_bin_edges") {
    c.psi_bin_edges = parse_list(value, key, parse_angle);
  } else if (key == "sweep_param") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->param = parse_sweep_param(value);
  } else if (key == "sweep_values") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->values = parse_list(value, key, parse_number);
  } else if (key == "output_dir" || key == "out") {
    c.output_dir = std::filesystem::path(std::string(value));
  } else if (key == "threads") {
    c.threads = value == "auto" ? 0u : static_cast<unsigned>(parse_count(value, key));
  } else {
    fail(Errc::config, "unknown setting '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(Errc::config, std::string(origin) + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      fail(Errc::config, std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig c;
  apply_config_text(c, buf.str(), path.string());
  return c;
}

}  // namespace psimax
