#pragma once

// Bearing geometry of the participating base stations as seen from a device
// at the origin: maximum angular separation, TOA/TDOA GDOP and hull membership.

#include <cstddef>
#include <span>
#include <vector>

namespace psimax {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Bearings in [0, 2pi), sorted ascending. Duplicates are kept and show up
/// as zero gaps. `source_index()[k]` is the caller's index of the k-th bearing.
class AngleSet {
 public:
  /// Bearings of `points` measured counter-clockwise from the +x axis.
  /// Throws Errc::degenerate_input if a point sits on the origin.
  static AngleSet from_points(std::span<const Point2> points);

  /// Normalizes each angle into [0, 2pi) and sorts.
  static AngleSet from_bearings(std::span<const double> radians);

  std::span<const double> bearings() const noexcept { return bearings_; }
  std::span<const std::size_t> source_index() const noexcept { return source_; }
  std::size_t size() const noexcept { return bearings_.size(); }

  /// Position of the bearing that came from caller index `source`.
  std::size_t position_of(std::size_t source) const;

  /// Consecutive gaps; the last one wraps around 2pi.
  std::vector<double> gaps() const;

 private:
  AngleSet(std::vector<double> b, std::vector<std::size_t> s);
  std::vector<double> bearings_;
  std::vector<std::size_t> source_;
};

double normalize_angle(double radians) noexcept;

/// Largest gap, wraparound included. 2pi for a single bearing.
double psi_max(const AngleSet& angles);

/// sqrt(tr((H^T H)^-1)) with unit-vector rows. +inf when H^T H is singular.
double gdop_toa_matrix(const AngleSet& angles);

/// sqrt(L) / sqrt(sum_{i<j} sin^2(theta_j - theta_i)). +inf on a zero denominator.
double gdop_toa_anglesum(const AngleSet& angles);

/// sqrt(L) / |sin(psi_max)|, an upper bound on the TOA GDOP.
double gdop_bound(std::size_t count, double psi_max);

/// TDOA GDOP against the bearing at `reference` (a position in `angles`).
/// Range differences share the reference error, so the measurement
/// covariance is sigma^2 (I + 11^T); its inverse is I - 11^T / L.
double gdop_tdoa(const AngleSet& angles, std::size_t reference);

double crlb_from_gdop(double gdop, double sigma_r);

struct HullMembership {
  bool inside = false;
  bool degenerate = false;  // |psi_max - pi| < kHullBoundaryTol
};

inline constexpr double kHullBoundaryTol = 1e-12;

HullMembership inside_convex_hull(const AngleSet& angles);

struct GeometryRecord {
  std::size_t count = 0;
  double psi_max = 0.0;
  double gdop_toa = 0.0;
  double gdop_tdoa = 0.0;
  bool inside_hull = false;
  bool degenerate = false;
};

/// Everything the simulation records for one hearable set (needs L >= 3).
GeometryRecord evaluate_geometry(const AngleSet& angles, std::size_t tdoa_reference);

}  // namespace psimax
