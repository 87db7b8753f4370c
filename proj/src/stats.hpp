#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace psimax {

/// Right-continuous step function (or sampled curve) F over increasing x.
/// For an ECDF, infinite samples are kept out of x and reported in
/// `infinite_mass`, so F tops out at 1 - infinite_mass.
struct DistributionTable {
  std::vector<double> x;
  std::vector<double> F;
  double infinite_mass = 0.0;

  /// F at the largest abscissa <= v; 0 below the first abscissa.
  double operator()(double v) const;
  bool empty() const noexcept { return x.empty(); }
};

DistributionTable ecdf(std::span<const double> values);

/// Mid-ranks (1-based); +inf ranks above every finite value.
std::vector<double> mid_ranks(std::span<const double> values);

double spearman_rho(std::span<const double> x, std::span<const double> y);

struct PearsonResult {
  double r = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // pairs with a non-finite member
};

PearsonResult pearson_r(std::span<const double> x, std::span<const double> y,
                        bool log_transform_y = false);

/// sup |F_a - F_b| over the merged abscissae, both treated as step functions.
double ks_distance(const DistributionTable& a, const DistributionTable& b);

/// Exact one-sample statistic between an ECDF and a continuous CDF: checks
/// both sides of every jump.
double ks_distance(const DistributionTable& sample, const std::function<double(double)>& cdf);

/// Linear-interpolated quantile (Hyndman-Fan type 7). Infinities sort last;
/// a quantile that touches one is +inf.
double quantile(std::span<const double> values, double p);

}  // namespace psimax
