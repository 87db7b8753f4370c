#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace psimax {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Determinants below this fraction of trace^2 are treated as singular.
inline constexpr double kSingularTol = 16.0 * std::numeric_limits<double>::epsilon();

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// a*d - b*c without the cancellation of the naive product difference.
inline double det2(double a, double b, double c, double d) noexcept {
  const double w = b * c;
  const double e = std::fma(-b, c, w);
  const double f = std::fma(a, d, -w);
  return f + e;
}

}  // namespace psimax
