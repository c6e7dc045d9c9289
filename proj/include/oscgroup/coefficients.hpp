#pragma once

#include <optional>
#include <string>
#include <utility>

#include "oscgroup/expr.hpp"

namespace oscgroup {

// The six real time-dependent coefficients of a quadratic Hamiltonian
//
//   i psi_t = -a psi_xx + b x^2 psi - i c x psi_x - i d psi - f x psi + i g psi_x
//
// together with the regime flag c0 (0 = Riccati-type parameter system,
// 1 = Ermakov-type) and an explicit closed time domain containing 0.
//
// Invariants (the user's modelling responsibility; checked lazily at
// evaluation points, never by singularity discovery): a(t) != 0 on the
// domain, and d(t) != 0 wherever sigma is evaluated unless d is the
// literal constant 0.
struct CoefficientSet {
    Expr a, b, c, d, f, g;
    int c0 = 0;
    double t_min = -2.0;
    double t_max = 2.0;

    // cached at construction: exact derivatives entering tau and sigma
    Expr da, dd;
    bool d_is_zero = true;
    bool f_is_zero = true, g_is_zero = true;
    bool c_is_zero = true;

    static CoefficientSet make(Expr a, Expr b, Expr c, Expr d, Expr f, Expr g, int c0 = 0,
                               double t_min = -2.0, double t_max = 2.0);
    bool in_domain(double t) const { return t >= t_min && t <= t_max; }
};

enum class Preset { Free, Oscillator, Driven };

// free: a=1, rest 0.  oscillator: a=b=1, rest 0.  driven: oscillator with a
// forcing term f(t).  The regime flag c0 is the caller's choice.
CoefficientSet preset(Preset which, std::optional<Expr> f_expr = std::nullopt, int c0 = 0);

// Characteristic-equation coefficients
//   tau   = a'/a - 2c + 4d
//   sigma = a b - c d + d^2 + (d/2)(a'/a - d'/d),
// the last term being 0 when d is identically zero (the limit taken by
// every example with d = 0).
std::pair<double, double> tau_sigma(const CoefficientSet& cs, double t);

// Gauge factor lambda(t) = exp(-int_0^t (c - 2d) ds), evaluated by adaptive
// quadrature to absolute tolerance 1e-10; lambda(0) = 1 exactly.
double lambda_factor(const CoefficientSet& cs, double t);

}  // namespace oscgroup
