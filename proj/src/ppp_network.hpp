#pragma once

// Poisson deployments of base stations around a device at the origin, with
// log-normal shadowing, load thinning and SINR-threshold hearability.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "angular_geometry.hpp"

namespace psimax {

/// Which base stations may be heard. `all_bs` follows the SINR expression
/// literally: every BS is a candidate and load only thins the interference.
/// `active_only` additionally requires the target BS to be active.
enum class CandidatePolicy { all_bs, active_only };

struct NetworkParams {
  double lambda = 2.0 / (1.7320508075688772 * 500.0 * 500.0);  // BS per m^2, 500 m hex ISD
  double load = 1.0;                                            // f
  double alpha = 4.0;
  double beta_over_gamma_db = -10.0;
  double sigma_s_db = 8.0;
  double sigma2 = 0.0;  // noise power, W
  double tx_power = 1.0;
  double window_radius = 5000.0;  // m
  std::uint64_t seed = 1;
  CandidatePolicy candidates = CandidatePolicy::all_bs;

  void validate() const;
  double mean_bs_count() const;
  double threshold_linear() const;
};

struct Scenario {
  std::vector<Point2> positions;
  std::vector<double> shadowing;        // linear gain, > 0
  std::vector<std::uint8_t> active;     // realized load indicator
  std::vector<std::size_t> hearable;    // SINR descending, ties by index

  std::size_t size() const noexcept { return positions.size(); }
};

/// Deterministic in (params.seed, scenario_id). Fills the hearable list.
Scenario sample_scenario(const NetworkParams& params, std::uint64_t scenario_id);

double sinr(const Scenario& scenario, const NetworkParams& params, std::size_t bs_index);

std::vector<std::size_t> hearable_set(const Scenario& scenario, const NetworkParams& params);

struct HearabilityRow {
  std::size_t count = 0;
  double probability = 0.0;
  double std_error = 0.0;
};

struct HearabilityTable {
  std::size_t n_scenarios = 0;
  std::vector<HearabilityRow> rows;  // count = 0..max observed

  std::vector<double> pmf() const;
  double probability_at_least(std::size_t count) const;
};

HearabilityTable hearability_from_counts(std::span<const std::uint64_t> histogram,
                                         std::size_t n_scenarios);

/// Monte Carlo estimate of P(N = L) over scenario ids [0, n_scenarios).
HearabilityTable empirical_hearability(const NetworkParams& params, std::size_t n_scenarios,
                                       unsigned threads = 1);

/// lambda * E[S^(2/alpha)] for log-normal S.
double shadowing_transformed_density(const NetworkParams& params);

}  // namespace psimax
