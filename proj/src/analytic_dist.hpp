#pragma once

// Closed-form laws of the maximum angular gap for L i.i.d. uniform bearings.

#include <cstddef>
#include <cstdint>
#include <span>

namespace psimax {

/// P(psi_max <= phi | N = L) from the random-arc covering series
///   sum_{n=0}^{chi} C(L,n) (-1)^n (1 - n phi / 2pi)^(L-1),  chi = min(L, floor(2pi/phi)).
/// The series alternates and cancels badly for small phi and large L; it is
/// summed in compensated double precision when the error estimate allows and
/// in 50-250 digit arithmetic otherwise.
double stevens_cdf(std::size_t count, double phi);

struct WeightedCdf {
  double value = 0.0;
  double truncation_bound = 0.0;  // upper bound on the neglected contribution
  std::size_t last_count = 0;     // largest L included in the sum
};

/// P(psi_max <= phi | N >= l_min) = sum_{L >= l_min} F_L(phi) P(N=L) / P(N >= l_min).
/// `pmf[L]` is P(N = L); mass missing from the table counts toward the tail.
/// The sum stops once the remaining tail mass drops below kWeightedTailStop.
WeightedCdf weighted_cdf(double phi, std::span<const double> pmf, std::size_t l_min = 4);

inline constexpr double kWeightedTailStop = 1e-6;

enum class ExpectedBsMethod { analytic, oracle };

struct ExpectedBsOptions {
  // Runs of the stopping-time simulation used to gate the closed form.
  // Zero skips the gate.
  std::size_t oracle_runs = 0;
  std::uint64_t oracle_seed = 1;
  // The closed form is rejected when it differs from the oracle by more than
  // gate_tolerance * oracle + gate_sigmas * standard error.
  double gate_tolerance = 0.01;
  double gate_sigmas = 3.0;
  // Runs used when the closed form cannot be evaluated at all.
  std::size_t fallback_runs = 20000;
};

struct ExpectedBs {
  double value = 0.0;
  ExpectedBsMethod method = ExpectedBsMethod::analytic;
  bool warning = false;
  double analytic = 0.0;          // NaN when not evaluable
  double oracle = 0.0;            // NaN when the oracle did not run
  double oracle_std_error = 0.0;
};

/// Expected number of uniform bearings needed before psi_max <= phi, 0 < phi < 2pi:
///   E[L] = 1 + sum_{n >= 1, 1 - n a > 0} (-1)^(n+1) (1 - n a)^(n-1) / (n a)^(n+1),  a = phi / 2pi.
ExpectedBs expected_bs_for_target(double phi, const ExpectedBsOptions& options = {});

/// Closed form alone. Throws Errc::domain if phi is so small that 250 digits
/// cannot resolve the alternating series.
double expected_bs_analytic(double phi);

struct StoppingTimeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Adds uniform bearings one at a time until psi_max <= phi and averages the
/// stopping count over `runs` independent runs.
StoppingTimeEstimate expected_bs_stopping_time(double phi, std::size_t runs, std::uint64_t seed);

}  // namespace psimax
