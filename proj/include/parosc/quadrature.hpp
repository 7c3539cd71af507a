#ifndef PAROSC_QUADRATURE_HPP
#define PAROSC_QUADRATURE_HPP

#include <functional>

#include "parosc/types.hpp"

namespace parosc {

struct QuadResult {
  Complex value{0.0, 0.0};
  double error = 0.0;   // estimated absolute error bound
  bool converged = false;
  long evaluations = 0;

  /// Value if converged, otherwise throws with the best estimate in the message.
  Complex checked(const char* what = "quadrature") const;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
QuadResult quad_adaptive(const std::function<Complex(double)>& f, double a, double b,
                         double tol, int max_intervals = 4000);

/// Adaptive quadrature over an axis-aligned box, N = 1 or 2 (nested for N = 2).
/// The integrand is expected to decay like a Gaussian inside the box.
QuadResult quad_nd(const std::function<Complex(const VecX&)>& f, const VecX& lo,
                   const VecX& hi, double tol);

}  // namespace parosc

#endif  // PAROSC_QUADRATURE_HPP
