#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "oscgroup/states.hpp"

namespace oscgroup {

// Equation context a transform element maps between.  `source()` is the
// equation its input must solve, `target()` the equation its image solves.
struct EquationContext {
    std::string id;  // "free", "oscillator", or a canonical coefficient signature
    bool operator==(const EquationContext&) const = default;

    static EquationContext free() { return {"free"}; }
    static EquationContext oscillator() { return {"oscillator"}; }
    static EquationContext of(const CoefficientSet& cs);
};

struct TimeInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double t) const { return t > lo && t < hi; }
};

// An invertible map acting on solution handles: psi(x, t) = prefactor(x, t)
// * chi(spatial map, time map).  Elements are immutable, application is
// pure, and composition is plain function composition verified numerically
// on grids.
//
// Naming note: osc_to_free / free_to_osc follow the classical names of the
// substitutions (which equation gets reduced to which).  As operators on
// solutions they run the other way: osc_to_free() consumes free-particle
// solutions and emits oscillator solutions, free_to_osc() the reverse.
// source()/target() are authoritative.
class TransformElement {
public:
    std::complex<double> apply(const SpaceTimeFn& chi, double x, double t) const;

    // Convenience closure binding `chi`.  The handle shares this element's
    // state, so it stays valid independently of the element's lifetime.
    SpaceTimeFn applied(SpaceTimeFn chi) const;

    const EquationContext& source() const { return source_; }
    const EquationContext& target() const { return target_; }
    const TimeInterval& validity() const { return validity_; }
    const std::string& name() const { return name_; }

    // psi = chi; defined only between matching contexts
    static TransformElement identity(EquationContext ctx);

    // psi(x,t) = exp[i(V x / 2 - V^2 t / 4)] chi(x - V t + x0, t - t0)
    static TransformElement galilei(double V, double x0 = 0.0, double t0 = 0.0);

    // psi(x,t) = chi(l x, l^2 t)
    static TransformElement dilatation(double l);

    // psi(x,t) = (1+mt)^{-1/2} exp(i m x^2 / (4(1+mt))) chi(x/(1+mt), t/(1+mt))
    static TransformElement expansion(double m);

    // the mu(0) = 0 variant, singular at t = 0:
    // psi(x,t) = (2t)^{-1/2} exp(i x^2 / (4t)) chi(-x/(2t), -1/(4t))
    static TransformElement expansion_singular();

    // psi(x,t) = exp(-(i/2) x^2 tan 2t) / sqrt(cos 2t) chi(x / cos 2t, tan(2t)/2);
    // free-particle solutions in, oscillator solutions out; |t| < pi/4
    static TransformElement osc_to_free();

    // psi(x,t) = (4t^2+1)^{-1/4} exp(i t x^2 / (4t^2+1))
    //            chi(x / sqrt(4t^2+1), arctan(2t)/2);
    // oscillator solutions in, free-particle solutions out; all t
    static TransformElement free_to_osc();

    // psi(x,t) = chi(-x, t - pi/4), the oscillator analog of the singular
    // expansion; oscillator solutions to oscillator solutions
    static TransformElement oscillator_half_period();

    // General substitution through a parameter trajectory between explicit
    // source/target coefficient contexts.
    static TransformElement ansatz(std::function<KernelParameters(double)> params,
                                   EquationContext source, EquationContext target,
                                   TimeInterval validity);

private:
    friend TransformElement compose(const TransformElement&, const TransformElement&);
    friend TransformElement invert(const TransformElement&);

    enum class Kind {
        Identity,
        Galilei,
        Dilatation,
        Expansion,
        ExpansionSingular,
        ExpansionSingularInverse,
        OscToFree,
        FreeToOsc,
        ReflectShift,
        Ansatz,
        AnsatzInverse,
        Composite,
    };

    TransformElement() = default;

    Kind kind_ = Kind::Identity;
    std::string name_ = "identity";
    EquationContext source_, target_;
    TimeInterval validity_;
    // parameter payload (per kind)
    double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
    double phase_ = 0.0;  // constant phase (Weyl center), used by inverses
    std::function<KernelParameters(double)> trajectory_;
    std::vector<TransformElement> parts_;  // Composite: outermost first
};

// Functional composition (outer o inner): the result applies `inner` first.
// Throws ContextMismatch unless inner.target() == outer.source().
TransformElement compose(const TransformElement& outer, const TransformElement& inner);

// Closed-form inverse for the primitive kinds, reversed-and-inverted list
// for composites, and time-map inversion for general ansatz elements.
TransformElement invert(const TransformElement& te);

}  // namespace oscgroup
