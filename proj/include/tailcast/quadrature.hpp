#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tailcast {

using RealFn = std::function<double(double)>;

struct QuadratureValue {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod over [a, b]; either end may be infinite.
QuadratureValue integrate(const RealFn& f, double a, double b, double rel_tol = 1e-11);

/// As integrate(), but splits [a, b] at every cut point strictly inside it.
/// Use for integrands with kinks or jumps at known locations.
QuadratureValue integrate_piecewise(const RealFn& f, double a, double b,
                                    std::span<const double> cuts, double rel_tol = 1e-11);

/// Fixed 20-point Gauss-Legendre on a finite interval.
double gauss_legendre(const RealFn& f, double a, double b);

/// Running integral of a fixed integrand, tabulated at knots so that
/// queries cost one short Gauss-Legendre pass instead of a full adaptive
/// integration. The integrand must be smooth between consecutive knots.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(RealFn f, std::vector<double> knots, double lo, double hi);

  /// Integral over [lo, x].
  double below(double x) const;
  /// Integral over [x, hi].
  double above(double x) const;
  double total() const { return total_; }

 private:
  RealFn f_;
  std::vector<double> knots_;
  std::vector<double> cumulative_;  // integral over [lo, knots_[i]]
  std::vector<double> tail_;        // integral over [knots_[i], hi]
  double lo_ = 0.0;
  double hi_ = 0.0;
  double total_ = 0.0;
};

}  // namespace tailcast
