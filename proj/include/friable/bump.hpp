#pragma once

// The smooth weight Phi: the indicator of [0.75, 2.25] mollified at width
// 0.25 by the normalized exp(-1/(1-s^2)) bump, so that
// 1_[1,2] <= Phi <= 1_(0.5,2.5).

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "friable/error.hpp"

namespace friable {

namespace detail {

inline double mollifier_raw(double s) {
  const double d = 1.0 - s * s;
  return d <= 0.0 ? 0.0 : std::exp(-1.0 / d);
}

inline double gk_integral(double a, double b) {
  double err = 0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(mollifier_raw, a, b, 3, 1e-14, &err);
  if (!(err <= 1e-12)) throw Error(ErrorCode::QuadratureFailure, "mollifier integral did not converge");
  return v;
}

}  // namespace detail

/// Normalizing constant of the mollifier, about 0.443993816.
inline double mollifier_mass() {
  static const double z = detail::gk_integral(-1.0, 1.0);
  return z;
}

/// Normalized mollifier m(s) on (-1, 1).
inline double mollifier(double s) { return detail::mollifier_raw(s) / mollifier_mass(); }

/// Distribution function of m. Integrating over [z, 0] rather than
/// [-1, z] keeps the relative quadrature tolerance meaningful near the edge.
inline double mollifier_cdf(double z) {
  if (z <= -1.0) return 0.0;
  if (z >= 1.0) return 1.0;
  if (z == 0.0) return 0.5;
  if (z > 0.0) return 1.0 - mollifier_cdf(-z);
  const double v = 0.5 - detail::gk_integral(z, 0.0) / mollifier_mass();
  return v < 0.0 ? 0.0 : v;
}

class BumpFunction {
 public:
  BumpFunction(double plateau_lo, double plateau_hi, double width, int derivative_cap = 3)
      : lo_(plateau_lo), hi_(plateau_hi), width_(width), derivative_cap_(derivative_cap) {
    if (!(width > 0.0) || !(plateau_hi - plateau_lo > 2.0 * width)) {
      throw Error(ErrorCode::OutOfRange, "BumpFunction: need width > 0 and a nonempty flat region");
    }
  }

  double operator()(double t) const {
    if (t <= support_lo() || t >= support_hi()) return 0.0;
    if (t >= lo_ + width_ && t <= hi_ - width_) return 1.0;
    const double v = mollifier_cdf((t - lo_) / width_) - mollifier_cdf((t - hi_) / width_);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }

  /// Open support (support_lo, support_hi).
  double support_lo() const { return lo_ - width_; }
  double support_hi() const { return hi_ + width_; }
  /// Phi == 1 on [flat_lo, flat_hi].
  double flat_lo() const { return lo_ + width_; }
  double flat_hi() const { return hi_ - width_; }
  double plateau_lo() const { return lo_; }
  double plateau_hi() const { return hi_; }
  double width() const { return width_; }
  int derivative_cap() const { return derivative_cap_; }
  /// The integral of Phi equals the length of the mollified interval.
  double integral() const { return hi_ - lo_; }

 private:
  double lo_;
  double hi_;
  double width_;
  int derivative_cap_;
};

/// Phi with flat region [1, 2] and support (0.5, 2.5).
inline BumpFunction make_phi() { return BumpFunction(0.75, 2.25, 0.25); }

}  // namespace friable
