#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "numeric.hpp"

namespace psimax {

namespace {

void require_no_nan(std::span<const double> v) {
  for (double x : v) {
    if (std::isnan(x)) fail(Errc::invalid_argument, "sample contains NaN");
  }
}

void require_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(Errc::invalid_argument, "paired samples differ in length");
  if (x.size() < 2) fail(Errc::invalid_argument, "correlation needs at least 2 pairs");
}

double correlation_two_pass(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx.value() > 0.0) || !(syy.value() > 0.0)) {
    fail(Errc::undefined_correlation, "correlation undefined: zero variance");
  }
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

double DistributionTable::operator()(double v) const {
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  if (it == x.begin()) return 0.0;
  return F[static_cast<std::size_t>(it - x.begin()) - 1];
}

DistributionTable ecdf(std::span<const double> values) {
  if (values.empty()) fail(Errc::invalid_argument, "ecdf of an empty sample");
  require_no_nan(values);
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values) {
    if (v == -kInf) fail(Errc::invalid_argument, "ecdf does not accept -inf");
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) fail(Errc::invalid_argument, "ecdf needs at least one finite value");
  std::sort(finite.begin(), finite.end());

  DistributionTable t;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (i + 1 < finite.size() && finite[i + 1] == finite[i]) continue;
    t.x.push_back(finite[i]);
    t.F.push_back(static_cast<double>(i + 1) / n);
  }
  t.infinite_mass = static_cast<double>(values.size() - finite.size()) / n;
  return t;
}

std::vector<double> mid_ranks(std::span<const double> values) {
  require_no_nan(values);
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y);
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  return correlation_two_pass(rx, ry);
}

PearsonResult pearson_r(std::span<const double> x, std::span<const double> y,
                        bool log_transform_y) {
  require_pairs(x, y);
  require_no_nan(x);
  require_no_nan(y);
  PearsonResult out;
  std::vector<double> xs, ys;
  xs.reserve(x.size());
  ys.reserve(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      ++out.excluded;
      continue;
    }
    double yv = y[i];
    if (log_transform_y) {
      if (!(yv > 0.0)) fail(Errc::invalid_argument, "log transform needs positive values");
      yv = std::log(yv);
    }
    xs.push_back(x[i]);
    ys.push_back(yv);
  }
  out.used = xs.size();
  if (out.used < 2) fail(Errc::undefined_correlation, "fewer than 2 finite pairs");
  out.r = correlation_two_pass(xs, ys);
  return out;
}

double ks_distance(const DistributionTable& a, const DistributionTable& b) {
  if (a.empty() || b.empty()) fail(Errc::invalid_argument, "ks_distance of an empty table");
  double d = 0.0;
  for (double v : a.x) d = std::max(d, std::fabs(a(v) - b(v)));
  for (double v : b.x) d = std::max(d, std::fabs(a(v) - b(v)));
  return d;
}

double ks_distance(const DistributionTable& sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) fail(Errc::invalid_argument, "ks_distance of an empty table");
  double d = 0.0;
  double below = 0.0;
  for (std::size_t i = 0; i < sample.x.size(); ++i) {
    const double g = cdf(sample.x[i]);
    d = std::max({d, std::fabs(sample.F[i] - g), std::fabs(below - g)});
    below = sample.F[i];
  }
  return d;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) fail(Errc::invalid_argument, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::invalid_argument, "quantile level must lie in [0, 1]");
  require_no_nan(values);
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  if (!std::isfinite(v[lo]) || !std::isfinite(v[hi])) return h == static_cast<double>(lo) ? v[lo] : kInf;
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace psimax
