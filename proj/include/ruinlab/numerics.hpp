#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ruinlab {

// Compensated summation; order of add() calls fixes the result bit-for-bit.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const noexcept { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double kahan_sum(std::span<const double> xs) noexcept {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

inline double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// (1 - e^{-d}) / d, continuous at d = 0.
inline double one_minus_exp_over(double d) noexcept {
  if (std::fabs(d) < 1e-8) return 1.0 - 0.5 * d;
  return -std::expm1(-d) / d;
}

// Adaptive Gauss-Kronrod (15 point) on a finite interval. The error target is
// relative to the L1 norm of f; 1e-13 keeps the absolute error below 1e-12 for
// the O(1) exponential moments integrated here.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol);
}

}  // namespace ruinlab
