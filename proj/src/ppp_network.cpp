#include "ppp_network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "error.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace psimax {

namespace {

constexpr std::size_t kBlockSize = 2048;

double received_power(const NetworkParams& p, const Point2& pos, double gain) {
  const double r2 = pos.x * pos.x + pos.y * pos.y;
  if (r2 == 0.0) fail(Errc::degenerate_input, "base station at zero distance");
  if (p.alpha == 4.0) return p.tx_power * gain / (r2 * r2);
  return p.tx_power * gain * std::pow(r2, -0.5 * p.alpha);
}

bool is_candidate(const Scenario& s, const NetworkParams& p, std::size_t i) {
  return p.candidates == CandidatePolicy::all_bs || s.active[i] != 0;
}

}  // namespace

void NetworkParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(Errc::invalid_argument, "lambda must be > 0");
  if (!(load >= 0.0 && load <= 1.0)) fail(Errc::invalid_argument, "load f must lie in [0, 1]");
  if (!(alpha > 2.0) || !std::isfinite(alpha)) fail(Errc::invalid_argument, "alpha must be > 2");
  if (std::isnan(beta_over_gamma_db) || beta_over_gamma_db == kInf) {
    fail(Errc::invalid_argument, "beta_over_gamma_db must be a number or -inf");
  }
  if (!(sigma_s_db >= 0.0) || !std::isfinite(sigma_s_db)) {
    fail(Errc::invalid_argument, "sigma_s_db must be >= 0");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) fail(Errc::invalid_argument, "sigma2 must be >= 0");
  if (!(tx_power > 0.0) || !std::isfinite(tx_power)) {
    fail(Errc::invalid_argument, "tx_power must be > 0");
  }
  if (!(window_radius > 0.0) || !std::isfinite(window_radius)) {
    fail(Errc::invalid_argument, "window_radius must be > 0");
  }
}

double NetworkParams::mean_bs_count() const {
  return lambda * std::numbers::pi * window_radius * window_radius;
}

double NetworkParams::threshold_linear() const {
  return std::pow(10.0, beta_over_gamma_db / 10.0);
}

Scenario sample_scenario(const NetworkParams& params, std::uint64_t scenario_id) {
  params.validate();
  auto eng = make_stream(params.seed, scenario_id);
  boost::random::poisson_distribution<std::int64_t, double> count_dist(params.mean_bs_count());
  boost::random::normal_distribution<double> normal(0.0, 1.0);

  const auto n = static_cast<std::size_t>(count_dist(eng));
  Scenario s;
  s.positions.resize(n);
  s.shadowing.resize(n);
  s.active.resize(n);
  // Fixed draw order per BS so that changing load or threshold reuses the
  // same deployment for a given (seed, scenario_id).
  for (std::size_t i = 0; i < n; ++i) {
    const double r = params.window_radius * std::sqrt(uniform01_open_low(eng));
    const double theta = kTwoPi * uniform01(eng);
    const double shadow_db = params.sigma_s_db * normal(eng);
    const double u = uniform01(eng);
    s.positions[i] = {r * std::cos(theta), r * std::sin(theta)};
    s.shadowing[i] = std::pow(10.0, shadow_db / 10.0);
    s.active[i] = u < params.load ? 1 : 0;
  }
  s.hearable = hearable_set(s, params);
  return s;
}

double sinr(const Scenario& scenario, const NetworkParams& params, std::size_t bs_index) {
  if (bs_index >= scenario.size()) fail(Errc::invalid_argument, "BS index out of range");
  const double signal =
      received_power(params, scenario.positions[bs_index], scenario.shadowing[bs_index]);
  long double interference = 0.0L;
  for (std::size_t y = 0; y < scenario.size(); ++y) {
    if (y == bs_index || scenario.active[y] == 0) continue;
    interference += received_power(params, scenario.positions[y], scenario.shadowing[y]);
  }
  const long double denom = interference + params.sigma2;
  if (denom == 0.0L) return kInf;
  return static_cast<double>(signal / denom);
}

std::vector<std::size_t> hearable_set(const Scenario& scenario, const NetworkParams& params) {
  const std::size_t n = scenario.size();
  std::vector<double> rx(n);
  long double total_active = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    rx[i] = received_power(params, scenario.positions[i], scenario.shadowing[i]);
    if (scenario.active[i] != 0) total_active += rx[i];
  }
  const long double threshold = params.threshold_linear();

  std::vector<std::pair<double, std::size_t>> heard;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_candidate(scenario, params, i)) continue;
    long double denom = total_active + params.sigma2;
    if (scenario.active[i] != 0) denom -= rx[i];
    if (denom < 0.0L) denom = 0.0L;
    if (static_cast<long double>(rx[i]) >= threshold * denom) {
      const double ratio = denom == 0.0L ? kInf : static_cast<double>(rx[i] / denom);
      heard.emplace_back(ratio, i);
    }
  }
  std::sort(heard.begin(), heard.end(), [](const auto& l, const auto& r) {
    return l.first != r.first ? l.first > r.first : l.second < r.second;
  });
  std::vector<std::size_t> out(heard.size());
  std::transform(heard.begin(), heard.end(), out.begin(), [](const auto& h) { return h.second; });
  return out;
}

std::vector<double> HearabilityTable::pmf() const {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i].probability;
  return out;
}

double HearabilityTable::probability_at_least(std::size_t count) const {
  CompensatedSum sum;
  for (const auto& r : rows) {
    if (r.count >= count) sum += r.probability;
  }
  return sum.value();
}

HearabilityTable hearability_from_counts(std::span<const std::uint64_t> histogram,
                                         std::size_t n_scenarios) {
  HearabilityTable t;
  t.n_scenarios = n_scenarios;
  std::size_t top = histogram.size();
  while (top > 1 && histogram[top - 1] == 0) --top;
  const double n = static_cast<double>(n_scenarios);
  for (std::size_t l = 0; l < top; ++l) {
    const double p = static_cast<double>(histogram[l]) / n;
    t.rows.push_back({l, p, std::sqrt(p * (1.0 - p) / n)});
  }
  return t;
}

HearabilityTable empirical_hearability(const NetworkParams& params, std::size_t n_scenarios,
                                       unsigned threads) {
  params.validate();
  if (n_scenarios == 0) fail(Errc::invalid_argument, "n_scenarios must be >= 1");
  const std::size_t n_blocks = (n_scenarios + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<std::uint64_t>> partial(n_blocks);
  parallel_blocks(n_blocks, threads, [&](std::size_t b) {
    auto& hist = partial[b];
    const std::size_t end = std::min(n_scenarios, (b + 1) * kBlockSize);
    for (std::size_t id = b * kBlockSize; id < end; ++id) {
      const auto s = sample_scenario(params, id);
      if (hist.size() <= s.hearable.size()) hist.resize(s.hearable.size() + 1, 0);
      ++hist[s.hearable.size()];
    }
  });
  std::vector<std::uint64_t> hist(1, 0);
  for (const auto& p : partial) {
    if (hist.size() < p.size()) hist.resize(p.size(), 0);
    for (std::size_t l = 0; l < p.size(); ++l) hist[l] += p[l];
  }
  return hearability_from_counts(hist, n_scenarios);
}

double shadowing_transformed_density(const NetworkParams& params) {
  if (!(params.alpha > 2.0)) fail(Errc::invalid_argument, "alpha must be > 2");
  const double sigma_ln = params.sigma_s_db * std::numbers::ln10 / 10.0;
  const double k = 2.0 / params.alpha;
  return params.lambda * std::exp(0.5 * k * k * sigma_ln * sigma_ln);
}

}  // namespace psimax
