#include "analytic_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "error.hpp"
#include "numeric.hpp"
#include "rng.hpp"

namespace psimax {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kStevensAbsTol = 1e-13;
constexpr double kExpectedRelTol = 1e-12;
constexpr std::size_t kExactBinomialMax = 60;

template <unsigned Digits>
using Mp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                         boost::multiprecision::et_off>;

// Evaluates `eval(Real{})` with enough decimal digits to absorb the
// cancellation of an alternating sum whose absolute terms add up to
// 10^log10_magnitude.
template <typename Eval>
double with_precision(double log10_magnitude, Eval&& eval) {
  const double need = log10_magnitude + 20.0;
  if (need <= 50.0) return eval(Mp<50>{});
  if (need <= 100.0) return eval(Mp<100>{});
  if (need <= 250.0) return eval(Mp<250>{});
  fail(Errc::domain, "alternating series needs more than 250 digits");
}

double log_binomial(std::size_t n, std::size_t k) {
  using boost::math::lgamma;
  return lgamma(static_cast<double>(n) + 1.0) - lgamma(static_cast<double>(k) + 1.0) -
         lgamma(static_cast<double>(n - k) + 1.0);
}

double exact_binomial(std::size_t n, std::size_t k) {
  std::uint64_t c = 1;
  k = std::min(k, n - k);
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;  // exact through n = 60
  return static_cast<double>(c);
}

// log(exp(x) + exp(y)) without overflow.
double log_add(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Largest n <= limit with 1 - n a > 0 (the rounding of fma keeps the sign exact).
std::size_t last_positive_term(double a, std::size_t limit) {
  std::size_t n = 0;
  while (n < limit && std::fma(-static_cast<double>(n + 1), a, 1.0) > 0.0) ++n;
  return n;
}

}  // namespace

double stevens_cdf(std::size_t count, double phi) {
  if (count == 0) fail(Errc::invalid_argument, "stevens_cdf needs L >= 1");
  if (!(phi > 0.0) || !(phi <= kTwoPi)) {
    fail(Errc::domain, "stevens_cdf needs 0 < phi <= 2pi");
  }
  const double a = phi / kTwoPi;
  if (a >= 1.0) return 1.0;
  if (count == 1) return 0.0;

  const std::size_t chi = last_positive_term(a, count);
  const auto exponent = static_cast<double>(count - 1);

  CompensatedSum sum;
  double log_magnitude = -kInf;
  double error = 0.0;
  for (std::size_t n = 0; n <= chi; ++n) {
    const double base = std::fma(-static_cast<double>(n), a, 1.0);
    double term = 0.0;
    double log_term = 0.0;
    double lgc = 0.0;
    if (count <= kExactBinomialMax) {
      term = exact_binomial(count, n) * std::pow(base, exponent);
      log_term = std::log(std::fabs(term));
    } else {
      lgc = log_binomial(count, n);
      log_term = lgc + exponent * std::log(base);
      term = std::exp(log_term);
    }
    sum += (n % 2 == 0) ? term : -term;
    log_magnitude = log_add(log_magnitude, log_term);
    error += std::fabs(term) * (static_cast<double>(count + 4) * kEps +
                                4.0 * kEps * (std::fabs(lgc) + std::fabs(log_term)));
  }
  // Cancellation can leave a residue just outside [0, 1] when the true value is
  // at an end of the range.
  if (error <= kStevensAbsTol && std::isfinite(sum.value())) return std::clamp(sum.value(), 0.0, 1.0);

  const double v = with_precision(log_magnitude / std::numbers::ln10, [&](auto tag) {
    using Real = decltype(tag);
    const Real ra(a);
    Real binom(1);
    Real total(0);
    for (std::size_t n = 0; n <= chi; ++n) {
      if (n > 0) binom = binom * Real(count - n + 1) / Real(n);
      const Real base = Real(1) - Real(n) * ra;
      const Real term = binom * pow(base, static_cast<int>(count - 1));
      if (n % 2 == 0) {
        total += term;
      } else {
        total -= term;
      }
    }
    return static_cast<double>(total);
  });
  return std::clamp(v, 0.0, 1.0);
}

WeightedCdf weighted_cdf(double phi, std::span<const double> pmf, std::size_t l_min) {
  CompensatedSum listed;
  CompensatedSum at_least;
  for (std::size_t l = 0; l < pmf.size(); ++l) {
    if (!(pmf[l] >= 0.0) || !std::isfinite(pmf[l])) {
      fail(Errc::invalid_argument, "pmf entries must be finite and non-negative");
    }
    listed += pmf[l];
    if (l >= l_min) at_least += pmf[l];
  }
  if (listed.value() > 1.0 + 1e-9) fail(Errc::invalid_argument, "pmf sums to more than 1");
  const double tail = std::max(0.0, 1.0 - listed.value());
  const double denom = at_least.value() + tail;
  if (!(denom > 0.0)) {
    fail(Errc::undefined_conditional, "P(N >= " + std::to_string(l_min) + ") is zero");
  }

  WeightedCdf out;
  CompensatedSum numerator;
  double remaining = at_least.value();
  for (std::size_t l = l_min; l < pmf.size(); ++l) {
    if (pmf[l] > 0.0) {
      numerator += stevens_cdf(l, phi) * pmf[l];
      out.last_count = l;
    }
    remaining -= pmf[l];
    if (std::max(0.0, remaining) + tail < kWeightedTailStop) break;
  }
  out.value = std::min(1.0, numerator.value() / denom);
  out.truncation_bound = (std::max(0.0, remaining) + tail) / denom;
  return out;
}

double expected_bs_analytic(double phi) {
  if (!(phi > 0.0) || !(phi < kTwoPi)) fail(Errc::domain, "expected BS count needs 0 < phi < 2pi");
  const double a = phi / kTwoPi;
  const std::size_t terms = last_positive_term(a, std::numeric_limits<std::size_t>::max());

  CompensatedSum sum;
  sum += 1.0;
  double log_magnitude = -kInf;
  double error = 0.0;
  for (std::size_t n = 1; n <= terms; ++n) {
    const double dn = static_cast<double>(n);
    const double base = std::fma(-dn, a, 1.0);
    const double log_term = (dn - 1.0) * std::log(base) - (dn + 1.0) * std::log(dn * a);
    const double term = std::exp(log_term);
    sum += (n % 2 == 1) ? term : -term;
    log_magnitude = log_add(log_magnitude, log_term);
    error += term * (2.0 * dn + 4.0 + std::fabs(log_term)) * kEps;
  }
  const double value = sum.value();
  if (std::isfinite(value) && error <= kExpectedRelTol * std::fabs(value)) return value;

  return with_precision(log_magnitude / std::numbers::ln10, [&](auto tag) {
    using Real = decltype(tag);
    const Real ra(a);
    Real total(1);
    for (std::size_t n = 1; n <= terms; ++n) {
      const Real na = Real(n) * ra;
      const Real term = pow(Real(1) - na, static_cast<int>(n - 1)) / pow(na, static_cast<int>(n + 1));
      if (n % 2 == 1) {
        total += term;
      } else {
        total -= term;
      }
    }
    return static_cast<double>(total);
  });
}

StoppingTimeEstimate expected_bs_stopping_time(double phi, std::size_t runs, std::uint64_t seed) {
  if (!(phi > 0.0) || !(phi < kTwoPi)) fail(Errc::domain, "expected BS count needs 0 < phi < 2pi");
  if (runs < 2) fail(Errc::invalid_argument, "stopping-time estimate needs at least 2 runs");

  CompensatedSum total, total_sq;
  std::set<double> points;
  std::multiset<double> gaps;
  for (std::size_t r = 0; r < runs; ++r) {
    auto eng = make_stream(seed, r);
    points.clear();
    gaps.clear();
    points.insert(kTwoPi * uniform01(eng));
    gaps.insert(kTwoPi);
    std::size_t count = 1;
    while (*gaps.rbegin() > phi) {
      const double t = kTwoPi * uniform01(eng);
      ++count;
      const auto [it, inserted] = points.insert(t);
      if (!inserted) continue;
      const double prev = it == points.begin() ? *points.rbegin() : *std::prev(it);
      const double next = std::next(it) == points.end() ? *points.begin() : *std::next(it);
      const auto wrap = [](double d) { return d < 0.0 ? d + kTwoPi : d; };
      const double old_gap = points.size() == 2 ? kTwoPi : wrap(next - prev);
      // Stored gaps are computed with the same expression, so the match is exact.
      const auto old = gaps.find(old_gap);
      if (old == gaps.end()) fail(Errc::invalid_argument, "stopping-time gap bookkeeping lost a gap");
      gaps.erase(old);
      gaps.insert(wrap(t - prev));
      gaps.insert(wrap(next - t));
    }
    const double c = static_cast<double>(count);
    total += c;
    total_sq += c * c;
  }
  const double n = static_cast<double>(runs);
  const double mean = total.value() / n;
  const double var = std::max(0.0, (total_sq.value() - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

ExpectedBs expected_bs_for_target(double phi, const ExpectedBsOptions& options) {
  ExpectedBs out;
  out.oracle = std::numeric_limits<double>::quiet_NaN();
  out.oracle_std_error = std::numeric_limits<double>::quiet_NaN();
  bool analytic_ok = true;
  try {
    out.analytic = expected_bs_analytic(phi);
  } catch (const Error& e) {
    if (e.code() != Errc::domain || !(phi > 0.0 && phi < kTwoPi)) throw;
    out.analytic = std::numeric_limits<double>::quiet_NaN();
    analytic_ok = false;
  }

  const std::size_t runs = analytic_ok ? options.oracle_runs : options.fallback_runs;
  if (runs > 0) {
    const auto est = expected_bs_stopping_time(phi, runs, options.oracle_seed);
    out.oracle = est.mean;
    out.oracle_std_error = est.std_error;
  }
  if (!analytic_ok) {
    out.value = out.oracle;
    out.method = ExpectedBsMethod::oracle;
    out.warning = true;
    return out;
  }
  if (runs > 0 && std::fabs(out.analytic - out.oracle) >
                      options.gate_tolerance * out.oracle + options.gate_sigmas * out.oracle_std_error) {
    out.value = out.oracle;
    out.method = ExpectedBsMethod::oracle;
    out.warning = true;
    return out;
  }
  out.value = out.analytic;
  out.method = ExpectedBsMethod::analytic;
  return out;
}

}  // namespace psimax
