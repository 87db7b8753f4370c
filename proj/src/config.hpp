#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppp_network.hpp"

namespace psimax {

enum class SweepParam { load, beta_over_gamma_db, lambda };

struct Sweep {
  SweepParam param = SweepParam::load;
  std::vector<double> values;
};

std::string_view to_string(SweepParam p) noexcept;

/// Returns a copy of `base` with the swept parameter set to `value`.
NetworkParams apply_sweep(const NetworkParams& base, SweepParam param, double value);

struct ExperimentConfig {
  NetworkParams network;
  std::size_t n_scenarios = 100000;
  std::size_t l_min = 4;
  std::vector<double> phi_grid;       // strictly increasing, within (0, 2pi]
  std::optional<Sweep> sweep;
  std::vector<double> psi_bin_edges;  // psi_max bins for GDOP-by-bin curves
  std::filesystem::path output_dir = ".";
  unsigned threads = 0;               // 0 = hardware concurrency

  ExperimentConfig();
  void validate() const;
};

/// Plain numbers or multiples of pi: "pi", "pi/4", "3*pi/4", "0.5*pi".
/// `key` names the setting in error messages.
double parse_angle(std::string_view token, std::string_view key);

/// k * 2pi / points for k = 1..points.
std::vector<double> default_phi_grid(std::size_t points = 128);

/// Applies one `key = value` setting. Keys and value syntax are documented
/// in the README; angles accept forms like `3*pi/4`.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines ('#' starts a comment) on top of the defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies a whole config text; `origin` names it in error messages.
void apply_config_text(ExperimentConfig& config, std::string_view text, std::string_view origin);

}  // namespace psimax
