#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace mixcub {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Smoothness alpha, integrability p and fine index theta of a mixed Besov
/// class. p and theta may be +infinity.
struct BesovParams {
  double alpha = 1.0;
  double p = 2.0;
  double theta = 2.0;

  double inv_p() const noexcept { return std::isinf(p) ? 0.0 : 1.0 / p; }
  double inv_theta() const noexcept { return std::isinf(theta) ? 0.0 : 1.0 / theta; }

  /// Parses "a,p,t"; "inf" is accepted for p and t.
  static BesovParams parse(const std::string& text);
};

/// (sum |x_i|^p)^(1/p) accumulator with the max convention at p = infinity.
class LpAccumulator {
 public:
  explicit LpAccumulator(double p) : p_(p) {}

  void add(double x) noexcept {
    const double a = std::abs(x);
    if (std::isinf(p_)) {
      if (a > acc_) acc_ = a;
    } else if (p_ == 1.0) {
      acc_ += a;
    } else if (p_ == 2.0) {
      acc_ += a * a;
    } else {
      acc_ += std::pow(a, p_);
    }
  }

  /// Raw sum of |x|^p (or the max for p = infinity).
  double power_sum() const noexcept { return acc_; }

  double value() const noexcept {
    if (std::isinf(p_) || p_ == 1.0) return acc_;
    if (p_ == 2.0) return std::sqrt(acc_);
    return std::pow(acc_, 1.0 / p_);
  }

 private:
  double p_;
  double acc_ = 0.0;
};

}  // namespace mixcub
