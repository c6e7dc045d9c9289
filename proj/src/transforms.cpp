#include "oscgroup/transforms.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace oscgroup {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> phase_factor(double phase) { return std::polar(1.0, phase); }

}  // namespace

EquationContext EquationContext::of(const CoefficientSet& cs) {
    const std::string sig = fmt::format("a={};b={};c={};d={};f={};g={}", cs.a.str(), cs.b.str(),
                                        cs.c.str(), cs.d.str(), cs.f.str(), cs.g.str());
    if (sig == "a=1;b=0;c=0;d=0;f=0;g=0") return free();
    if (sig == "a=1;b=1;c=0;d=0;f=0;g=0") return oscillator();
    return {sig};
}

std::complex<double> TransformElement::apply(const SpaceTimeFn& chi, double x, double t) const {
    if (!validity_.contains(t))
        throw SingularTime(
            fmt::format("{} is singular at t={} (valid on ({}, {}))", name_, t, validity_.lo,
                        validity_.hi));
    switch (kind_) {
        case Kind::Identity:
            return phase_factor(phase_) * chi(x, t);
        case Kind::Galilei: {
            const double V = p1_, x0 = p2_, t0 = p3_;
            return phase_factor(phase_ + 0.5 * V * x - 0.25 * V * V * t) *
                   chi(x - V * t + x0, t - t0);
        }
        case Kind::Dilatation:
            return phase_factor(phase_) * chi(p1_ * x, p1_ * p1_ * t);
        case Kind::Expansion: {
            const double s = 1.0 + p1_ * t;
            return phase_factor(phase_ + 0.25 * p1_ * x * x / s) / std::sqrt(s) *
                   chi(x / s, t / s);
        }
        case Kind::ExpansionSingular:
            return phase_factor(phase_ + 0.25 * x * x / t) / std::sqrt(2.0 * t) *
                   chi(-0.5 * x / t, -0.25 / t);
        case Kind::ExpansionSingularInverse: {
            // undoes the singular expansion: here t plays the role of the
            // new time (negative), and the original time is -1/(4t)
            const double torig = -0.25 / t;
            const double xorig = 0.5 * x / t;
            return phase_factor(phase_ - 0.25 * xorig * xorig / torig) *
                   std::sqrt(2.0 * torig) * chi(xorig, torig);
        }
        case Kind::OscToFree: {
            const double c2 = std::cos(2.0 * t);
            const double tn = std::tan(2.0 * t);
            return phase_factor(phase_ - 0.5 * x * x * tn) / std::sqrt(c2) *
                   chi(x / c2, 0.5 * tn);
        }
        case Kind::FreeToOsc: {
            const double s = 4.0 * t * t + 1.0;
            return phase_factor(phase_ + t * x * x / s) / std::pow(s, 0.25) *
                   chi(x / std::sqrt(s), 0.5 * std::atan(2.0 * t));
        }
        case Kind::ReflectShift:
            return phase_factor(phase_) * chi(-x, t - p1_);
        case Kind::Ansatz: {
            const KernelParameters p = trajectory_(t);
            if (p.mu <= 0.0)
                throw SingularTime(fmt::format("{}: mu = {} not positive at t={}", name_, p.mu, t));
            if (p.beta == 0.0)
                throw SingularTime(fmt::format("{}: beta vanishes at t={}", name_, t));
            const double phi = p.alpha * x * x + p.delta * x + p.kappa;
            return phase_factor(phase_ + phi) / std::sqrt(p.mu) *
                   chi(p.beta * x + p.epsilon, -p.gamma);
        }
        case Kind::AnsatzInverse: {
            // solve -gamma(s) = t for s; gamma is strictly monotone when the
            // source coefficient a keeps one sign
            const double lo = p1_, hi = p2_;
            auto tau_of = [&](double s) { return -trajectory_(s).gamma; };
            double a = lo, b = hi, fa = tau_of(a) - t, fb = tau_of(b) - t;
            if (fa == 0.0) b = a;
            else if (fb == 0.0) a = b;
            else if (fa * fb > 0.0)
                throw SingularTime(
                    fmt::format("{}: new time {} outside the invertible window", name_, t));
            for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b));
                 ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = tau_of(mid) - t;
                if (fm == 0.0) { a = b = mid; break; }
                if ((fm < 0.0) == (fa < 0.0)) { a = mid; fa = fm; }
                else { b = mid; fb = fm; }
            }
            const double s = 0.5 * (a + b);
            const KernelParameters p = trajectory_(s);
            if (p.mu <= 0.0)
                throw SingularTime(fmt::format("{}: mu = {} not positive at t={}", name_, p.mu, s));
            if (p.beta == 0.0)
                throw SingularTime(fmt::format("{}: beta vanishes at t={}", name_, s));
            const double xorig = (x - p.epsilon) / p.beta;
            const double phi = p.alpha * xorig * xorig + p.delta * xorig + p.kappa;
            return phase_factor(phase_ - phi) * std::sqrt(p.mu) * chi(xorig, s);
        }
        case Kind::Composite: {
            // parts_ are outermost first; build the nested handle lazily
            std::function<std::complex<double>(std::size_t, double, double)> level =
                [&](std::size_t idx, double xx, double tt) -> std::complex<double> {
                if (idx + 1 == parts_.size()) return parts_[idx].apply(chi, xx, tt);
                return parts_[idx].apply(
                    [&, idx](double x2, double t2) { return level(idx + 1, x2, t2); }, xx, tt);
            };
            return phase_factor(phase_) * level(0, x, t);
        }
    }
    throw Error("unreachable transform kind");
}

SpaceTimeFn TransformElement::applied(SpaceTimeFn chi) const {
    return [element = *this, chi = std::move(chi)](double x, double t) {
        return element.apply(chi, x, t);
    };
}

TransformElement TransformElement::identity(EquationContext ctx) {
    TransformElement e;
    e.kind_ = Kind::Identity;
    e.name_ = "identity";
    e.source_ = ctx;
    e.target_ = std::move(ctx);
    return e;
}

TransformElement TransformElement::galilei(double V, double x0, double t0) {
    TransformElement e;
    e.kind_ = Kind::Galilei;
    e.name_ = fmt::format("galilei(V={},x0={},t0={})", V, x0, t0);
    e.source_ = e.target_ = EquationContext::free();
    e.p1_ = V;
    e.p2_ = x0;
    e.p3_ = t0;
    return e;
}

TransformElement TransformElement::dilatation(double l) {
    if (l == 0.0) throw DomainError("dilatation parameter must be nonzero");
    TransformElement e;
    e.kind_ = Kind::Dilatation;
    e.name_ = fmt::format("dilatation(l={})", l);
    e.source_ = e.target_ = EquationContext::free();
    e.p1_ = l;
    return e;
}

TransformElement TransformElement::expansion(double m) {
    TransformElement e;
    e.kind_ = Kind::Expansion;
    e.name_ = fmt::format("expansion(m={})", m);
    e.source_ = e.target_ = EquationContext::free();
    e.p1_ = m;
    // 1 + m t vanishes at -1/m; keep a 0.9 margin on the side containing 0
    if (m > 0.0) e.validity_.lo = -0.9 / m;
    else if (m < 0.0) e.validity_.hi = -0.9 / m;
    return e;
}

TransformElement TransformElement::expansion_singular() {
    TransformElement e;
    e.kind_ = Kind::ExpansionSingular;
    e.name_ = "expansion_singular";
    e.source_ = e.target_ = EquationContext::free();
    e.validity_.lo = 0.0;
    return e;
}

TransformElement TransformElement::osc_to_free() {
    TransformElement e;
    e.kind_ = Kind::OscToFree;
    e.name_ = "osc_to_free";
    e.source_ = EquationContext::free();
    e.target_ = EquationContext::oscillator();
    e.validity_ = {-0.9 * kPi / 4.0, 0.9 * kPi / 4.0};
    return e;
}

TransformElement TransformElement::free_to_osc() {
    TransformElement e;
    e.kind_ = Kind::FreeToOsc;
    e.name_ = "free_to_osc";
    e.source_ = EquationContext::oscillator();
    e.target_ = EquationContext::free();
    return e;
}

TransformElement TransformElement::oscillator_half_period() {
    TransformElement e;
    e.kind_ = Kind::ReflectShift;
    e.name_ = "oscillator_half_period";
    e.source_ = e.target_ = EquationContext::oscillator();
    e.p1_ = kPi / 4.0;
    return e;
}

TransformElement TransformElement::ansatz(std::function<KernelParameters(double)> params,
                                          EquationContext source, EquationContext target,
                                          TimeInterval validity) {
    TransformElement e;
    e.kind_ = Kind::Ansatz;
    e.name_ = "ansatz";
    e.source_ = std::move(source);
    e.target_ = std::move(target);
    e.validity_ = validity;
    e.trajectory_ = std::move(params);
    return e;
}

TransformElement compose(const TransformElement& outer, const TransformElement& inner) {
    if (!(inner.target_ == outer.source_))
        throw ContextMismatch(fmt::format("cannot chain {} (target '{}') into {} (source '{}')",
                                          inner.name_, inner.target_.id, outer.name_,
                                          outer.source_.id));
    TransformElement e;
    e.kind_ = TransformElement::Kind::Composite;
    e.name_ = outer.name_ + " o " + inner.name_;
    e.source_ = inner.source_;
    e.target_ = outer.target_;
    // conservative: the outer window; inner denominators surface lazily
    e.validity_ = outer.validity_;
    auto append = [&e](const TransformElement& part) {
        if (part.kind_ == TransformElement::Kind::Composite)
            e.parts_.insert(e.parts_.end(), part.parts_.begin(), part.parts_.end());
        else
            e.parts_.push_back(part);
    };
    append(outer);
    append(inner);
    return e;
}

TransformElement invert(const TransformElement& te) {
    using Kind = TransformElement::Kind;
    TransformElement e;
    e.name_ = "inv(" + te.name_ + ")";
    e.source_ = te.target_;
    e.target_ = te.source_;
    switch (te.kind_) {
        case Kind::Identity:
            e.kind_ = Kind::Identity;
            e.phase_ = -te.phase_;
            return e;
        case Kind::Galilei: {
            const double V = te.p1_, x0 = te.p2_, t0 = te.p3_;
            e.kind_ = Kind::Galilei;
            e.p1_ = -V;
            e.p2_ = -x0 + V * t0;
            e.p3_ = -t0;
            e.phase_ = -te.phase_ + 0.5 * V * x0 - 0.25 * V * V * t0;
            return e;
        }
        case Kind::Dilatation:
            e.kind_ = Kind::Dilatation;
            e.p1_ = 1.0 / te.p1_;
            e.phase_ = -te.phase_;
            return e;
        case Kind::Expansion: {
            e.kind_ = Kind::Expansion;
            e.p1_ = -te.p1_;
            e.phase_ = -te.phase_;
            const double m = e.p1_;
            if (m > 0.0) e.validity_ = {-0.9 / m, std::numeric_limits<double>::infinity()};
            else if (m < 0.0) e.validity_ = {-std::numeric_limits<double>::infinity(), -0.9 / m};
            return e;
        }
        case Kind::ExpansionSingular:
            e.kind_ = Kind::ExpansionSingularInverse;
            e.phase_ = -te.phase_;
            e.validity_ = {-std::numeric_limits<double>::infinity(), 0.0};
            return e;
        case Kind::ExpansionSingularInverse:
            e.kind_ = Kind::ExpansionSingular;
            e.phase_ = -te.phase_;
            e.validity_ = {0.0, std::numeric_limits<double>::infinity()};
            return e;
        case Kind::OscToFree:
            e.kind_ = Kind::FreeToOsc;
            e.phase_ = -te.phase_;
            return e;
        case Kind::FreeToOsc:
            e.kind_ = Kind::OscToFree;
            e.phase_ = -te.phase_;
            e.validity_ = {-0.9 * kPi / 4.0, 0.9 * kPi / 4.0};
            return e;
        case Kind::ReflectShift:
            e.kind_ = Kind::ReflectShift;
            e.p1_ = -te.p1_;
            e.phase_ = -te.phase_;
            return e;
        case Kind::Ansatz: {
            if (!std::isfinite(te.validity_.lo) || !std::isfinite(te.validity_.hi))
                throw NotInvertible("ansatz inversion needs a finite validity interval");
            e.kind_ = Kind::AnsatzInverse;
            e.trajectory_ = te.trajectory_;
            e.phase_ = -te.phase_;
            // bracket for the time solve, shrunk off the open endpoints
            const double pad = 1e-9 * (te.validity_.hi - te.validity_.lo);
            e.p1_ = te.validity_.lo + pad;
            e.p2_ = te.validity_.hi - pad;
            KernelParameters plo = te.trajectory_(e.p1_);
            KernelParameters phi = te.trajectory_(e.p2_);
            e.validity_ = {std::min(-plo.gamma, -phi.gamma), std::max(-plo.gamma, -phi.gamma)};
            return e;
        }
        case Kind::AnsatzInverse: {
            e.kind_ = Kind::Ansatz;
            e.trajectory_ = te.trajectory_;
            e.phase_ = -te.phase_;
            e.validity_ = {te.p1_, te.p2_};
            return e;
        }
        case Kind::Composite: {
            e.kind_ = Kind::Composite;
            for (auto it = te.parts_.rbegin(); it != te.parts_.rend(); ++it)
                e.parts_.push_back(invert(*it));
            e.phase_ = -te.phase_;
            e.validity_ = e.parts_.front().validity_;
            return e;
        }
    }
    throw NotInvertible("unknown transform kind");
}

}  // namespace oscgroup
