#pragma once

#include <complex>
#include <functional>

#include "oscgroup/grid.hpp"
#include "oscgroup/kernel_systems.hpp"

namespace oscgroup {

// A space-time wave function handle psi(x, t).
using SpaceTimeFn = std::function<std::complex<double>(double x, double t)>;

// Physicists' Hermite polynomial by the three-term recurrence
// H_0 = 1, H_1 = 2x, H_{k+1} = 2x H_k - 2k H_{k-1}.  Requires n <= 200.
double hermite(int n, double x);

// Oscillator wave function of order n for one parameter point:
//
//   psi_n = exp(i(alpha x^2 + delta x + kappa) + i(2n+1) gamma)
//           / sqrt(2^n n! mu sqrt(pi)) * exp(-(beta x + eps)^2 / 2)
//           * H_n(beta x + eps).
//
// The normalization is evaluated through the recurrence for the normalized
// Hermite functions, which stays bounded where the naive 2^n n! factor
// would overflow.  Requires mu > 0 and beta != 0.
std::complex<double> oscillator_state(int n, const KernelParameters& p, double x);

// Wave-function family generated by the Ermakov solution through `init`.
// The returned handle is safe to call concurrently.
SpaceTimeFn ermakov_state_family(const FundamentalSolution& fs, KernelParameters init, int n);
SpaceTimeFn closed_form_state_family(ClosedFormCase which, KernelParameters init, int n);

// Green function G(x, y, t) built from the fundamental solution:
//   G = (2 pi i mu0)^{-1/2} exp[i(alpha0 x^2 + beta0 x y + gamma0 y^2
//                                 + delta0 x + eps0 y + kappa0)]
// with the principal branch of the square root.
std::complex<double> green_function(const FundamentalPoint& fp, double x, double y);

// Samples f(x, t) on a grid.  Parallel across grid points.
GridState sample_state(const SpaceTimeFn& f, const Grid& grid, double t,
                       Exec exec = Exec::parallel);

// psi(x, t) = int G(x, y, t) psi0(y) dy by trapezoid rule over the initial
// grid; O(n^2) and the dominant parallel kernel.  `edge_magnitude` reports
// max |psi0| at the initial grid edges; the quadrature silently truncates
// whatever has not decayed there (flagged when >= 1e-12).
struct PropagationResult {
    GridState psi;
    double edge_magnitude = 0.0;
    bool truncation_warning = false;
};
PropagationResult propagate(const FundamentalPoint& fp, const GridState& initial,
                            const Grid& target, Exec exec = Exec::parallel);

// sqrt(trapezoid integral of |psi|^2)
double grid_norm(const GridState& gs);

// Applies the dynamic invariant
//   E(t) = (lambda/2) [ (p - 2 alpha x - delta)^2 / beta^2 + (beta x + eps)^2 ]
// with p = -i d/dx taken by 4th-order central differences (one-sided at the
// edges).
GridState invariant_apply(const KernelParameters& p, double lambda, const GridState& gs);

// real part of <psi, E psi> by trapezoid rule
double energy_expectation(const KernelParameters& p, double lambda, const GridState& gs);

}  // namespace oscgroup
