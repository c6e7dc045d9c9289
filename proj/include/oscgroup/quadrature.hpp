#pragma once

#include <functional>

#include "oscgroup/errors.hpp"

namespace oscgroup {

// Adaptive Gauss-Kronrod (15-point Kronrod / 7-point Gauss) quadrature with
// globally adaptive bisection of the worst interval.  Throws QuadratureError
// when the absolute tolerance is not reached within the subdivision budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_intervals = 4000);

}  // namespace oscgroup
