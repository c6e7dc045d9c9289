#pragma once

#include <array>
#include <functional>

#include "oscgroup/characteristic.hpp"

namespace oscgroup {

// One point (mu, alpha, beta, gamma, delta, epsilon, kappa) of the parameter
// manifold at time t: mu the amplitude factor, alpha the quadratic phase,
// beta the spatial scale, gamma the new-time parameter (tau_new = -gamma),
// delta the linear phase, epsilon the spatial shift, kappa the additive
// phase.
struct KernelParameters {
    double mu = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    double gamma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double kappa = 0.0;
    double t = 0.0;
};

// Fundamental parameter trajectory (alpha0 ... kappa0) built over the
// standard characteristic solutions, plus the gauge factor lambda.
struct FundamentalPoint {
    double alpha0, beta0, gamma0, delta0, epsilon0, kappa0;
    double lambda;
    double mu0, dmu0;
    double t;
};

class FundamentalSolution {
public:
    // Keeps a reference to `cd`; the characteristic data must outlive this
    // object.  `quad_tol` is the absolute tolerance of the delta0/epsilon0/
    // kappa0 quadratures (they are skipped entirely when f and g are the
    // literal constant 0, in which case those components are exactly 0).
    explicit FundamentalSolution(const CharacteristicData& cd, double quad_tol = 1e-9);

    // Throws SingularTime at a caustic (mu0(t) = 0, which includes t = 0)
    // and QuadratureError when mu0' vanishes inside a driven integral.
    FundamentalPoint at(double t) const;

    const CharacteristicData& characteristic() const { return *cd_; }
    const CoefficientSet& coefficients() const { return cd_->coefficients(); }

private:
    double delta0_integral(double t) const;

    const CharacteristicData* cd_;
    double quad_tol_;
    double d0_over_2a0_;
    double g0_over_2a0_;
};

// Solution of the Riccati-type parameter system (c0 = 0) through arbitrary
// initial data with beta(0) != 0, expressed through the fundamental
// solution.  Throws SingularTime when alpha(0) + gamma0(t) vanishes or the
// resulting mu does.
KernelParameters riccati_general(const FundamentalSolution& fs, const KernelParameters& init,
                                 double t);

// Solution of the Ermakov-type parameter system (c0 = 1) through arbitrary
// initial data with beta(0) != 0 and a(0) > 0.  The arctan in gamma is
// branch-continued in t (continuous through zeros of the denominator and
// across caustics), starting from the principal value as t -> 0+.
KernelParameters ermakov_general(const FundamentalSolution& fs, const KernelParameters& init,
                                 double t);

// The four closed-form specializations for constant coefficients.  They
// serve as an independent oracle for riccati_general/ermakov_general:
//   FreeToFree  free equation,       c0 = 0
//   OscToFree   oscillator equation, c0 = 0
//   FreeToOsc   free equation,       c0 = 1
//   OscToOsc    oscillator equation, c0 = 1
enum class ClosedFormCase { FreeToFree, OscToFree, FreeToOsc, OscToOsc };

KernelParameters closed_form_params(ClosedFormCase which, const KernelParameters& init, double t);

// Absolute residuals of the six parameter equations at time t for an
// arbitrary trajectory, with d/dt taken by 6th-order central differences
// (step 1e-3).  The trajectory must be evaluable on [t-3h, t+3h].
std::array<double, 6> system_residual(const CoefficientSet& cs,
                                      const std::function<KernelParameters(double)>& trajectory,
                                      double t, double fd_step = 1e-3);

}  // namespace oscgroup
