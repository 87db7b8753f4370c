#include "angular_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"
#include "numeric.hpp"

namespace psimax {

namespace {

void require_count(const AngleSet& angles, std::size_t min_count, const char* what) {
  if (angles.size() < min_count) {
    fail(Errc::insufficient_geometry, std::string(what) + " needs at least " +
                                          std::to_string(min_count) + " bearings, got " +
                                          std::to_string(angles.size()));
  }
}

constexpr std::size_t kTdoaTripleSumMax = 64;

double gdop_from_information(double a, double b, double d) {
  const double trace = a + d;
  const double det = det2(a, b, b, d);
  if (!(det > kSingularTol * trace * trace)) return kInf;
  return std::sqrt(trace / det);
}

}  // namespace

double normalize_angle(double radians) noexcept {
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi || r == 0.0) r = 0.0;
  return r;
}

AngleSet::AngleSet(std::vector<double> b, std::vector<std::size_t> s)
    : bearings_(std::move(b)), source_(std::move(s)) {}

AngleSet AngleSet::from_bearings(std::span<const double> radians) {
  if (radians.empty()) fail(Errc::invalid_argument, "angle set needs at least one bearing");
  std::vector<double> normalized(radians.size());
  for (std::size_t i = 0; i < radians.size(); ++i) {
    if (!std::isfinite(radians[i])) fail(Errc::invalid_argument, "bearing is not finite");
    normalized[i] = normalize_angle(radians[i]);
  }
  std::vector<std::size_t> order(radians.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return normalized[l] < normalized[r]; });
  std::vector<double> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = normalized[order[k]];
  return AngleSet(std::move(sorted), std::move(order));
}

AngleSet AngleSet::from_points(std::span<const Point2> points) {
  if (points.empty()) fail(Errc::invalid_argument, "angle set needs at least one point");
  std::vector<double> raw(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.x == 0.0 && p.y == 0.0) {
      fail(Errc::degenerate_input, "point " + std::to_string(i) + " lies on the origin");
    }
    raw[i] = std::atan2(p.y, p.x);
  }
  return from_bearings(raw);
}

std::size_t AngleSet::position_of(std::size_t source) const {
  const auto it = std::find(source_.begin(), source_.end(), source);
  if (it == source_.end()) fail(Errc::invalid_argument, "unknown source index");
  return static_cast<std::size_t>(it - source_.begin());
}

std::vector<double> AngleSet::gaps() const {
  const std::size_t n = bearings_.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g[i] = bearings_[i + 1] - bearings_[i];
  g[n - 1] = kTwoPi - (bearings_[n - 1] - bearings_[0]);
  return g;
}

double psi_max(const AngleSet& angles) {
  require_count(angles, 1, "psi_max");
  const auto g = angles.gaps();
  return *std::max_element(g.begin(), g.end());
}

double gdop_toa_matrix(const AngleSet& angles) {
  require_count(angles, 2, "TOA GDOP");
  // Work relative to the first bearing: near-collinear sets then have small
  // sine components and H^T H keeps its relative accuracy.
  const auto b = angles.bearings();
  CompensatedSum cc, cs, ss;
  for (double theta : b) {
    const double t = theta - b[0];
    const double c = std::cos(t);
    const double s = std::sin(t);
    cc += c * c;
    cs += c * s;
    ss += s * s;
  }
  return gdop_from_information(cc.value(), cs.value(), ss.value());
}

double gdop_toa_anglesum(const AngleSet& angles) {
  require_count(angles, 2, "TOA GDOP");
  const auto b = angles.bearings();
  const double count = static_cast<double>(b.size());
  CompensatedSum sum;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      const double s = std::sin(b[j] - b[i]);
      sum += s * s;
    }
  }
  const double denom = sum.value();
  if (!(denom > kSingularTol * count * count)) return kInf;
  return std::sqrt(count / denom);
}

double gdop_bound(std::size_t count, double psi_max) {
  if (count < 2) fail(Errc::insufficient_geometry, "GDOP bound needs at least 2 bearings");
  const double s = std::fabs(std::sin(psi_max));
  if (s <= kSingularTol) return kInf;
  return std::sqrt(static_cast<double>(count)) / s;
}

double gdop_tdoa(const AngleSet& angles, std::size_t reference) {
  require_count(angles, 3, "TDOA GDOP");
  const auto b = angles.bearings();
  if (reference >= b.size()) fail(Errc::invalid_argument, "TDOA reference index out of range");
  const std::size_t n = b.size();

  // With W = I - 11^T/L the information matrix H^T W H is the scatter matrix
  // of the unit vectors u_i about their mean, whatever the reference. For
  // points on the unit circle, with s_ij = sin((theta_j - theta_i)/2):
  //   trace = (4/L) sum_{i<j} s_ij^2
  //   det   = (16/L) sum_{i<j<k} (s_ij s_jk s_ik)^2
  // Both are sums of non-negative terms, so near-collinear sets keep full
  // relative accuracy.
  if (n <= kTdoaTripleSumMax) {
    std::vector<double> half(n * n, 0.0);
    CompensatedSum pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double sij = std::sin(0.5 * (b[j] - b[i]));
        half[i * n + j] = sij;
        pairs += sij * sij;
      }
    }
    CompensatedSum triples;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double sij = half[i * n + j];
        for (std::size_t k = j + 1; k < n; ++k) {
          const double t = sij * half[j * n + k] * half[i * n + k];
          triples += t * t;
        }
      }
    }
    const double count = static_cast<double>(n);
    const double trace = 4.0 * pairs.value() / count;
    const double det = 16.0 * triples.value() / count;
    if (!(det > kSingularTol * trace * trace)) return kInf;
    return std::sqrt(trace / det);
  }

  // Large sets: explicit scatter in the frame where u_ref = (1, 0).
  std::vector<double> hx(n), hy(n);
  CompensatedSum mx, my;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = b[i] - b[reference];
    const double half = std::sin(0.5 * t);
    hx[i] = -2.0 * half * half;  // cos t - 1
    hy[i] = std::sin(t);
    mx += hx[i];
    my += hy[i];
  }
  const double cx = mx.value() / static_cast<double>(n);
  const double cy = my.value() / static_cast<double>(n);
  CompensatedSum jxx, jxy, jyy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = hx[i] - cx;
    const double dy = hy[i] - cy;
    jxx += dx * dx;
    jxy += dx * dy;
    jyy += dy * dy;
  }
  return gdop_from_information(jxx.value(), jxy.value(), jyy.value());
}

double crlb_from_gdop(double gdop, double sigma_r) {
  if (std::isnan(gdop) || gdop < 0.0) fail(Errc::invalid_argument, "GDOP must be non-negative");
  if (!(sigma_r > 0.0)) fail(Errc::invalid_argument, "ranging sigma must be positive");
  return sigma_r * sigma_r * gdop * gdop;
}

HullMembership inside_convex_hull(const AngleSet& angles) {
  require_count(angles, 3, "hull membership");
  const double psi = psi_max(angles);
  return {psi < std::numbers::pi, std::fabs(psi - std::numbers::pi) < kHullBoundaryTol};
}

GeometryRecord evaluate_geometry(const AngleSet& angles, std::size_t tdoa_reference) {
  require_count(angles, 3, "geometry record");
  GeometryRecord rec;
  rec.count = angles.size();
  rec.psi_max = psi_max(angles);
  rec.gdop_toa = gdop_toa_matrix(angles);
  rec.gdop_tdoa = gdop_tdoa(angles, tdoa_reference);
  rec.inside_hull = rec.psi_max < std::numbers::pi;
  rec.degenerate = std::fabs(rec.psi_max - std::numbers::pi) < kHullBoundaryTol;
  return rec;
}

}  // namespace psimax
