#include "oscgroup/coefficients.hpp"

#include <fmt/format.h>

#include <cmath>

#include "oscgroup/quadrature.hpp"

namespace oscgroup {

CoefficientSet CoefficientSet::make(Expr a, Expr b, Expr c, Expr d, Expr f, Expr g, int c0,
                                    double t_min, double t_max) {
    if (c0 != 0 && c0 != 1) throw DomainError("c0 must be 0 or 1");
    if (!(t_min <= 0.0 && 0.0 <= t_max))
        throw DomainError("time domain must contain 0");
    CoefficientSet cs{std::move(a), std::move(b), std::move(c), std::move(d),
                      std::move(f), std::move(g), c0, t_min, t_max,
                      Expr{}, Expr{}, false, false, false, false};
    cs.da = cs.a.derivative();
    cs.dd = cs.d.derivative();
    cs.d_is_zero = cs.d.is_literal_zero();
    cs.f_is_zero = cs.f.is_literal_zero();
    cs.g_is_zero = cs.g.is_literal_zero();
    cs.c_is_zero = cs.c.is_literal_zero();
    return cs;
}

CoefficientSet preset(Preset which, std::optional<Expr> f_expr, int c0) {
    const Expr zero = Expr::constant(0.0);
    const Expr one = Expr::constant(1.0);
    switch (which) {
        case Preset::Free:
            return CoefficientSet::make(one, zero, zero, zero, zero, zero, c0);
        case Preset::Oscillator:
            return CoefficientSet::make(one, one, zero, zero, zero, zero, c0);
        case Preset::Driven:
            if (!f_expr) throw DomainError("driven preset needs a forcing expression");
            return CoefficientSet::make(one, one, zero, zero, *f_expr, zero, c0);
    }
    throw DomainError("unknown preset");
}

std::pair<double, double> tau_sigma(const CoefficientSet& cs, double t) {
    const double a = cs.a.eval(t);
    if (a == 0.0) throw DomainError(fmt::format("coefficient a vanishes at t={}", t));
    const double ratio_a = cs.da.eval(t) / a;
    const double b = cs.b.eval(t);
    const double c = cs.c.eval(t);
    const double tau = ratio_a - 2.0 * c + 4.0 * cs.d.eval(t);
    double sigma = a * b;
    if (!cs.d_is_zero) {
        const double d = cs.d.eval(t);
        if (d == 0.0)
            throw DomainError(fmt::format("coefficient d vanishes at t={} (d'/d undefined)", t));
        sigma += -c * d + d * d + 0.5 * d * (ratio_a - cs.dd.eval(t) / d);
    }
    return {tau, sigma};
}

double lambda_factor(const CoefficientSet& cs, double t) {
    if (t == 0.0 || (cs.c_is_zero && cs.d_is_zero)) return 1.0;
    double integral = integrate(
        [&cs](double s) { return cs.c.eval(s) - 2.0 * cs.d.eval(s); }, 0.0, t, 1e-10);
    return std::exp(-integral);
}

}  // namespace oscgroup
