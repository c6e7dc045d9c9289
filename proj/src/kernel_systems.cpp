#include "oscgroup/kernel_systems.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "oscgroup/quadrature.hpp"

namespace oscgroup {

namespace {

void require_finite(const KernelParameters& p, double t) {
    if (!(std::isfinite(p.mu) && std::isfinite(p.alpha) && std::isfinite(p.beta) &&
          std::isfinite(p.gamma) && std::isfinite(p.delta) && std::isfinite(p.epsilon) &&
          std::isfinite(p.kappa)))
        throw SingularTime(fmt::format("parameter solution is singular at t={}", t));
}

}  // namespace

FundamentalSolution::FundamentalSolution(const CharacteristicData& cd, double quad_tol)
    : cd_(&cd), quad_tol_(quad_tol) {
    const CoefficientSet& cs = cd.coefficients();
    const double a0 = cd.a0();
    d0_over_2a0_ = cs.d.eval(0.0) / (2.0 * a0);
    g0_over_2a0_ = cs.g.eval(0.0) / (2.0 * a0);
}

// integral entering delta0: int_0^t [(f - (d/a) g) mu0 + (g / 2a) mu0'] / lambda ds
double FundamentalSolution::delta0_integral(double t) const {
    const CoefficientSet& cs = cd_->coefficients();
    return integrate(
        [&](double s) {
            const double a = cs.a.eval(s);
            if (a == 0.0) throw DomainError(fmt::format("coefficient a vanishes at t={}", s));
            const double force = cs.f.eval(s) - cs.d.eval(s) / a * cs.g.eval(s);
            const double drift = cs.g.eval(s) / (2.0 * a);
            return (force * cd_->mu0(s) + drift * cd_->dmu0(s)) / lambda_factor(cs, s);
        },
        0.0, t, quad_tol_);
}

FundamentalPoint FundamentalSolution::at(double t) const {
    const CoefficientSet& cs = cd_->coefficients();
    const double mu0 = cd_->mu0(t);
    const double dmu0 = cd_->dmu0(t);
    if (mu0 == 0.0 || std::abs(mu0) < 1e-250)
        throw SingularTime(fmt::format("caustic: mu0 vanishes at t={}", t));

    const double a = cs.a.eval(t);
    if (a == 0.0) throw DomainError(fmt::format("coefficient a vanishes at t={}", t));
    const double lambda = lambda_factor(cs, t);

    FundamentalPoint fp{};
    fp.t = t;
    fp.mu0 = mu0;
    fp.dmu0 = dmu0;
    fp.lambda = lambda;
    fp.alpha0 = dmu0 / (4.0 * a * mu0) - cs.d.eval(t) / (2.0 * a);
    fp.beta0 = -lambda / mu0;
    fp.gamma0 = cd_->mu1(t) / (2.0 * mu0) + d0_over_2a0_;

    if (cs.f_is_zero && cs.g_is_zero) {
        fp.delta0 = fp.epsilon0 = fp.kappa0 = 0.0;
        return fp;
    }

    // mu0' may not vanish inside the epsilon0/kappa0 integrands
    {
        const CharacteristicData& cd = *cd_;
        const double lo = std::min(0.0, t), hi = std::max(0.0, t);
        const double probe = (hi - lo) / 64.0;
        double prev = cd.dmu0(lo);
        for (double s = lo + probe; s <= hi + 1e-15; s += probe) {
            double cur = cd.dmu0(std::min(s, hi));
            if (prev == 0.0 || std::signbit(prev) != std::signbit(cur))
                throw QuadratureError(
                    fmt::format("mu0' vanishes inside (0, {}]; driven integrals undefined", t));
            prev = cur;
        }
    }

    const double integral_d = delta0_integral(t);
    fp.delta0 = lambda / mu0 * integral_d;

    // mu0(s) delta0(s) == lambda(s) * delta0_integral(s): the mu0 factors
    // cancel, keeping the integrands finite at s = 0
    auto product = [&](double s) { return lambda_factor(cs, s) * delta0_integral(s); };
    auto force = [&](double s) {
        const double as = cs.a.eval(s);
        if (as == 0.0) throw DomainError(fmt::format("coefficient a vanishes at t={}", s));
        return cs.f.eval(s) - cs.d.eval(s) / as * cs.g.eval(s);
    };

    const double eps_int1 = integrate(
        [&](double s) {
            const double as = cs.a.eval(s);
            const double sigma = tau_sigma(cs, s).second;
            const double d0 = cd_->dmu0(s);
            return as * sigma * lambda_factor(cs, s) / (d0 * d0) * product(s);
        },
        0.0, t, quad_tol_);
    const double eps_int2 = integrate(
        [&](double s) { return cs.a.eval(s) * lambda_factor(cs, s) / cd_->dmu0(s) * force(s); },
        0.0, t, quad_tol_);
    fp.epsilon0 = -2.0 * a * lambda / dmu0 * fp.delta0 + 8.0 * eps_int1 + 2.0 * eps_int2;

    const double kap_int1 = integrate(
        [&](double s) {
            const double as = cs.a.eval(s);
            const double sigma = tau_sigma(cs, s).second;
            const double d0 = cd_->dmu0(s);
            const double p = product(s);
            return as * sigma / (d0 * d0) * p * p;
        },
        0.0, t, quad_tol_);
    const double kap_int2 = integrate(
        [&](double s) { return cs.a.eval(s) / cd_->dmu0(s) * product(s) * force(s); }, 0.0, t,
        quad_tol_);
    fp.kappa0 = a * mu0 / dmu0 * fp.delta0 * fp.delta0 - 4.0 * kap_int1 - 2.0 * kap_int2;
    return fp;
}

KernelParameters riccati_general(const FundamentalSolution& fs, const KernelParameters& init,
                                 double t) {
    if (init.beta == 0.0) throw DomainError("initial beta must be nonzero");
    const FundamentalPoint fp = fs.at(t);
    const double den = init.alpha + fp.gamma0;
    if (den == 0.0)
        throw SingularTime(fmt::format("alpha(0) + gamma0(t) vanishes at t={}", t));

    KernelParameters p;
    p.t = t;
    p.mu = 2.0 * init.mu * fp.mu0 * den;
    p.alpha = fp.alpha0 - fp.beta0 * fp.beta0 / (4.0 * den);
    p.beta = -init.beta * fp.beta0 / (2.0 * den);
    p.gamma = init.gamma - init.beta * init.beta / (4.0 * den);
    const double shifted = init.delta + fp.epsilon0;
    p.delta = fp.delta0 - fp.beta0 * shifted / (2.0 * den);
    p.epsilon = init.epsilon - init.beta * shifted / (2.0 * den);
    p.kappa = init.kappa + fp.kappa0 - shifted * shifted / (4.0 * den);
    if (p.mu == 0.0) throw SingularTime(fmt::format("mu vanishes at t={}", t));
    require_finite(p, t);
    return p;
}

KernelParameters ermakov_general(const FundamentalSolution& fs, const KernelParameters& init,
                                 double t) {
    if (init.beta == 0.0) throw DomainError("initial beta must be nonzero");
    if (fs.characteristic().a0() <= 0.0)
        throw DomainError("the Ermakov solution requires a(0) > 0");
    const FundamentalPoint fp = fs.at(t);
    const double u = init.alpha + fp.gamma0;
    const double b2 = init.beta * init.beta;
    const double b3 = b2 * init.beta;
    const double b4 = b2 * b2;
    const double disc = b4 + 4.0 * u * u;  // > 0 for real nonzero beta(0)
    const double root = std::sqrt(disc);

    // Branch continuation of arctan(beta^2(0) / (2u)): atan2 carries the
    // angle through u = 0, the mu0 winding count carries it across caustics,
    // and the offset pins the t -> 0 limit to 0 from both sides (gamma0
    // diverges to +inf as t -> 0+ and to -inf as t -> 0-).
    const int crossings = fs.characteristic().caustics_crossed(t);
    const double offset = t >= 0.0 ? std::numbers::pi * crossings
                                   : -std::numbers::pi * (crossings + 1);
    const double angle = std::atan2(b2, 2.0 * u) + offset;

    KernelParameters p;
    p.t = t;
    p.mu = init.mu * fp.mu0 * root;
    p.alpha = fp.alpha0 - fp.beta0 * fp.beta0 * u / disc;
    p.beta = -init.beta * fp.beta0 / root;
    p.gamma = init.gamma - 0.5 * angle;
    const double shifted = init.delta + fp.epsilon0;
    p.delta = fp.delta0 - fp.beta0 * (init.epsilon * b3 + 2.0 * u * shifted) / disc;
    p.epsilon = (2.0 * init.epsilon * u - init.beta * shifted) / root;
    p.kappa = init.kappa + fp.kappa0 - init.epsilon * b3 * shifted / disc +
              u * (init.epsilon * init.epsilon * b2 - shifted * shifted) / disc;
    if (p.mu == 0.0) throw SingularTime(fmt::format("mu vanishes at t={}", t));
    require_finite(p, t);
    return p;
}

KernelParameters closed_form_params(ClosedFormCase which, const KernelParameters& init, double t) {
    KernelParameters p;
    p.t = t;
    const double b2 = init.beta * init.beta;
    const double b3 = b2 * init.beta;
    const double b4 = b2 * b2;
    switch (which) {
        case ClosedFormCase::FreeToFree: {
            const double den = 1.0 + 4.0 * init.alpha * t;
            if (den == 0.0)
                throw SingularTime(fmt::format("1 + 4 alpha(0) t vanishes at t={}", t));
            p.mu = init.mu * den;
            p.alpha = init.alpha / den;
            p.beta = init.beta / den;
            p.gamma = init.gamma - b2 * t / den;
            p.delta = init.delta / den;
            p.epsilon = init.epsilon - 2.0 * init.beta * init.delta * t / den;
            p.kappa = init.kappa - init.delta * init.delta * t / den;
            break;
        }
        case ClosedFormCase::OscToFree: {
            const double s = std::sin(2.0 * t), c = std::cos(2.0 * t);
            const double den = 2.0 * init.alpha * s + c;
            if (den == 0.0)
                throw SingularTime(
                    fmt::format("2 alpha(0) sin 2t + cos 2t vanishes at t={}", t));
            p.mu = init.mu * den;
            p.alpha = (2.0 * init.alpha * c - s) / (2.0 * den);
            p.beta = init.beta / den;
            p.gamma = init.gamma - b2 * s / (2.0 * den);
            p.delta = init.delta / den;
            p.epsilon = init.epsilon - init.beta * init.delta * s / den;
            p.kappa = init.kappa - init.delta * init.delta * s / (2.0 * den);
            break;
        }
        case ClosedFormCase::FreeToOsc: {
            const double q = 4.0 * init.alpha * t + 1.0;
            const double disc = 4.0 * b4 * t * t + q * q;
            const double root = std::sqrt(disc);
            p.mu = init.mu * root;
            p.alpha = (b4 * t + init.alpha * q) / disc;
            p.beta = init.beta / root;
            p.gamma = init.gamma - 0.5 * std::atan2(2.0 * b2 * t, q);
            p.delta = (2.0 * init.epsilon * b3 * t + init.delta * q) / disc;
            p.epsilon = (init.epsilon * q - 2.0 * init.beta * init.delta * t) / root;
            p.kappa = init.kappa +
                      t * q * (init.epsilon * init.epsilon * b2 - init.delta * init.delta) / disc -
                      t * t * 4.0 * init.epsilon * init.delta * b3 / disc;
            break;
        }
        case ClosedFormCase::OscToOsc: {
            const double s = std::sin(2.0 * t), c = std::cos(2.0 * t);
            const double q = 2.0 * init.alpha * s + c;
            const double disc = b4 * s * s + q * q;
            const double root = std::sqrt(disc);
            p.mu = init.mu * root;
            p.alpha = (init.alpha * std::cos(4.0 * t) +
                       std::sin(4.0 * t) * (b4 + 4.0 * init.alpha * init.alpha - 1.0) / 4.0) /
                      disc;
            p.beta = init.beta / root;
            p.gamma = init.gamma - 0.5 * std::atan2(b2 * s, q);
            p.delta = (init.delta * q + init.epsilon * b3 * s) / disc;
            p.epsilon = (init.epsilon * q - init.beta * init.delta * s) / root;
            p.kappa = init.kappa +
                      s * s *
                          (init.epsilon * b2 * (init.alpha * init.epsilon - init.beta * init.delta) -
                           init.alpha * init.delta * init.delta) /
                          disc +
                      0.25 * std::sin(4.0 * t) *
                          (init.epsilon * init.epsilon * b2 - init.delta * init.delta) / disc;
            break;
        }
    }
    require_finite(p, t);
    return p;
}

std::array<double, 6> system_residual(const CoefficientSet& cs,
                                      const std::function<KernelParameters(double)>& trajectory,
                                      double t, double fd_step) {
    // 6th-order central first derivative
    static constexpr double stencil[7] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
    KernelParameters samples[7];
    for (int k = -3; k <= 3; ++k) samples[k + 3] = trajectory(t + k * fd_step);
    const KernelParameters p = samples[3];

    auto derivative = [&](auto member) {
        double acc = 0.0;
        for (int i = 0; i < 7; ++i) acc += stencil[i] * samples[i].*member;
        return acc / (60.0 * fd_step);
    };
    const double dalpha = derivative(&KernelParameters::alpha);
    const double dbeta = derivative(&KernelParameters::beta);
    const double dgamma = derivative(&KernelParameters::gamma);
    const double ddelta = derivative(&KernelParameters::delta);
    const double deps = derivative(&KernelParameters::epsilon);
    const double dkappa = derivative(&KernelParameters::kappa);

    const double a = cs.a.eval(t);
    const double b = cs.b.eval(t);
    const double c = cs.c.eval(t);
    const double f = cs.f.eval(t);
    const double g = cs.g.eval(t);
    const double c0 = static_cast<double>(cs.c0);
    const double b2 = p.beta * p.beta;
    const double b3 = b2 * p.beta;
    const double b4 = b2 * b2;

    return {
        std::abs(dalpha + b + 2.0 * c * p.alpha + 4.0 * a * p.alpha * p.alpha - c0 * a * b4),
        std::abs(dbeta + (c + 4.0 * a * p.alpha) * p.beta),
        std::abs(dgamma + a * b2),
        std::abs(ddelta + (c + 4.0 * a * p.alpha) * p.delta - f - 2.0 * g * p.alpha -
                 2.0 * c0 * a * b3 * p.epsilon),
        std::abs(deps - (g - 2.0 * a * p.delta) * p.beta),
        std::abs(dkappa - g * p.delta + a * p.delta * p.delta - c0 * a * b2 * p.epsilon * p.epsilon),
    };
}

}  // namespace oscgroup
