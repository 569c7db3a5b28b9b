#pragma once

#include <functional>

namespace secdrive {

struct QuadratureResult {
  double value = 0.0;
  /// Sum of |Kronrod - Gauss| over the accepted subintervals.
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) by recursive bisection. The tolerance is
/// absolute and is distributed across subintervals in proportion to their
/// length. Throws NonConvergence when a subinterval would need more than 60
/// bisections.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol);

inline double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                  double tol) {
  return integrate_adaptive(f, a, b, tol).value;
}

}  // namespace secdrive
