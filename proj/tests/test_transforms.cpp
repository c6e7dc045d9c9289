#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oscgroup/transforms.hpp"
#include "oscgroup/verify.hpp"
#include "test_support.hpp"

using namespace oscgroup;
using namespace oscgroup::testing;

namespace {

constexpr double kPi = std::numbers::pi;
using complexd = std::complex<double>;

// textbook oscillator solution families (hh, trivial data) and the
// free-particle arctan family (fh, trivial data)
SpaceTimeFn hh_family(int n) {
    return closed_form_state_family(ClosedFormCase::OscToOsc, KernelParameters{}, n);
}
SpaceTimeFn fh_family(int n) {
    return closed_form_state_family(ClosedFormCase::FreeToOsc, KernelParameters{}, n);
}

// smooth probe with structure in both arguments, no solution property
const SpaceTimeFn probe = [](double x, double t) {
    return complexd(std::cos(0.7 * x) + 0.2 * x, std::sin(0.4 * x + 1.1 * t));
};

double family_sup_diff(const SpaceTimeFn& a, const SpaceTimeFn& b, const Grid& grid, double t) {
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k)
        worst = std::max(worst, std::abs(a(grid.x(k), t) - b(grid.x(k), t)));
    return worst;
}

double residual_of_image(const SpaceTimeFn& image, const CoefficientSet& target_eq,
                         const Grid& grid, double t) {
    return pde_residual(target_eq, sample_block(image, grid, t));
}

const Grid kGrid = Grid::over(-8.0, 8.0, 1.0 / 64.0);

}  // namespace

TEST_CASE("identity element is pointwise trivial") {
    const auto id = TransformElement::identity(EquationContext::oscillator());
    for (double x : {-1.2, 0.4, 2.0})
        for (double t : {-0.3, 0.8})
            CHECK(id.apply(probe, x, t) == probe(x, t));
    CHECK(id.source() == id.target());
}

TEST_CASE("the cos/tan substitution at (1, pi/8)") {
    const auto el = TransformElement::osc_to_free();
    const double t = kPi / 8;
    const complexd expected =
        std::polar(std::pow(2.0, 0.25), -0.5) * probe(std::sqrt(2.0), 0.5);
    CHECK(std::abs(el.apply(probe, 1.0, t) - expected) < 1e-13);
    CHECK(el.source() == EquationContext::free());
    CHECK(el.target() == EquationContext::oscillator());
    CHECK_THROWS_AS(el.apply(probe, 1.0, kPi / 4), SingularTime);
}

TEST_CASE("the arctan substitution at (0, 1)") {
    const auto el = TransformElement::free_to_osc();
    const complexd expected = std::pow(5.0, -0.25) * probe(0.0, 0.5 * std::atan(2.0));
    CHECK(std::abs(el.apply(probe, 0.0, 1.0) - expected) < 1e-13);
    CHECK(el.source() == EquationContext::oscillator());
    CHECK(el.target() == EquationContext::free());
}

TEST_CASE("galilei elements") {
    const auto id = TransformElement::galilei(0.0, 0.0, 0.0);
    CHECK(std::abs(id.apply(probe, 1.3, 0.4) - probe(1.3, 0.4)) < 1e-15);

    // V = 2 at (x, t) = (1, 1): the phase V x/2 - V^2 t/4 vanishes
    const auto boost = TransformElement::galilei(2.0);
    const SpaceTimeFn unit = [](double, double) { return complexd(1.0, 0.0); };
    CHECK(std::abs(boost.apply(unit, 1.0, 1.0) - complexd(1.0, 0.0)) < 1e-15);

    // composition law: same modulus as the combined boost
    const auto g1 = TransformElement::galilei(1.1);
    const auto g2 = TransformElement::galilei(0.7);
    const auto combined = TransformElement::galilei(1.8);
    const auto chained = compose(g1, g2);
    for (double x : {-2.0, 0.3, 1.7})
        for (double t : {-0.5, 0.0, 0.9}) {
            CHECK(std::abs(std::abs(chained.apply(probe, x, t)) -
                           std::abs(combined.apply(probe, x, t))) < 1e-12);
        }
}

TEST_CASE("dilatation and expansion elements") {
    CHECK(std::abs(TransformElement::dilatation(1.0).apply(probe, 0.7, 0.2) - probe(0.7, 0.2)) <
          1e-15);
    CHECK(std::abs(TransformElement::expansion(0.0).apply(probe, 0.7, 0.2) - probe(0.7, 0.2)) <
          1e-15);
    CHECK_THROWS_AS(TransformElement::dilatation(0.0), DomainError);

    // expansion(1) at (2, 1): prefactor 2^{-1/2}, phase 4/8, arguments (1, 1/2)
    const auto el = TransformElement::expansion(1.0);
    const complexd expected = std::polar(1.0 / std::sqrt(2.0), 0.5) * probe(1.0, 0.5);
    CHECK(std::abs(el.apply(probe, 2.0, 1.0) - expected) < 1e-14);

    // dilatation rescales both arguments
    const auto dil = TransformElement::dilatation(1.5);
    CHECK(std::abs(dil.apply(probe, 2.0, 0.4) - probe(3.0, 0.9)) < 1e-14);
}

TEST_CASE("the singular expansion and its inverse") {
    const auto el = TransformElement::expansion_singular();
    CHECK_THROWS_AS(el.apply(probe, 1.0, -0.2), SingularTime);
    // the element consumes data at negative new-times and produces t > 0, so
    // each round-trip order is the identity on its own side of t = 0
    const auto undo_first = compose(el, invert(el));
    for (double x : {-1.0, 0.5, 2.2})
        for (double t : {0.2, 0.7, 1.5})
            CHECK(std::abs(undo_first.apply(probe, x, t) - probe(x, t)) < 1e-13);
    const auto undo_last = compose(invert(el), el);
    for (double x : {-1.0, 0.5, 2.2})
        for (double t : {-1.4, -0.6, -0.1})
            CHECK(std::abs(undo_last.apply(probe, x, t) - probe(x, t)) < 1e-13);
}

TEST_CASE("local inverses: substitution round trip is the identity") {
    const auto roundtrip =
        compose(TransformElement::free_to_osc(), TransformElement::osc_to_free());
    const SpaceTimeFn textbook = hh_family(0);
    for (double t : {-0.37, -0.1, 0.05, 0.25, 0.37}) {
        CHECK(std::abs(t) < kPi / 8);
        CHECK(family_sup_diff(roundtrip.applied(textbook), textbook, kGrid, t) < 1e-10);
    }
    // and the other order, on a free solution
    const auto other = compose(TransformElement::osc_to_free(), TransformElement::free_to_osc());
    const SpaceTimeFn free0 = fh_family(0);
    for (double t : {-0.3, 0.2})
        CHECK(family_sup_diff(other.applied(free0), free0, kGrid, t) < 1e-10);
}

TEST_CASE("primitive inverses act as the identity on grids") {
    const auto g = TransformElement::galilei(0.9, 0.4, -0.3);
    const auto ginv = invert(g);
    CHECK(family_sup_diff(compose(ginv, g).applied(probe), probe, kGrid, 0.6) < 1e-12);
    CHECK(family_sup_diff(compose(g, ginv).applied(probe), probe, kGrid, 0.6) < 1e-12);

    const auto d = TransformElement::dilatation(1.4);
    CHECK(family_sup_diff(compose(invert(d), d).applied(probe), probe, kGrid, 0.5) < 1e-12);

    const auto e = TransformElement::expansion(0.6);
    CHECK(family_sup_diff(compose(invert(e), e).applied(probe), probe, kGrid, 0.4) < 1e-12);

    const auto h = TransformElement::oscillator_half_period();
    CHECK(family_sup_diff(compose(invert(h), h).applied(probe), probe, kGrid, 0.8) < 1e-15);
}

TEST_CASE("ansatz elements and their inverses") {
    static CharacteristicData cd = solve_characteristic(preset(Preset::Oscillator), 1e-3, 1e-12);
    static FundamentalSolution fs(cd);
    KernelParameters init;
    init.alpha = 0.2;
    init.beta = 1.1;
    init.delta = 0.3;
    const auto el = TransformElement::ansatz(
        [&](double t) { return ermakov_general(fs, init, t); }, EquationContext::oscillator(),
        EquationContext::oscillator(), TimeInterval{0.05, 0.9});
    const auto back = compose(invert(el), el);
    // the round trip reproduces chi inside the image of the new-time map
    // tau = -gamma(t), here roughly (0.058, 0.717)
    for (double x : {-0.8, 0.3, 1.4})
        for (double t : {0.1, 0.4, 0.7})
            CHECK(std::abs(back.apply(probe, x, t) - probe(x, t)) < 1e-9);
}

TEST_CASE("context mismatch and unknown compositions are rejected") {
    CHECK_THROWS_AS(compose(TransformElement::galilei(1.0), TransformElement::osc_to_free()),
                    ContextMismatch);
    CHECK_NOTHROW(compose(TransformElement::free_to_osc(), TransformElement::osc_to_free()));
    CHECK_THROWS_AS(
        invert(TransformElement::ansatz([](double t) { KernelParameters p; p.t = t; return p; },
                                        EquationContext::free(), EquationContext::free(),
                                        TimeInterval{})),
        NotInvertible);
}

TEST_CASE("every named element maps source solutions to target solutions") {
    const CoefficientSet free_eq = preset(Preset::Free);
    const CoefficientSet osc_eq = preset(Preset::Oscillator);

    struct Case {
        const char* label;
        TransformElement element;
        SpaceTimeFn input;
        const CoefficientSet* target;
        double t;
    };
    const Case cases[] = {
        {"galilei", TransformElement::galilei(0.8, 0.3, 0.1), fh_family(1), &free_eq, 0.4},
        {"dilatation", TransformElement::dilatation(1.3), fh_family(0), &free_eq, 0.3},
        {"expansion", TransformElement::expansion(0.5), fh_family(0), &free_eq, 0.35},
        {"expansion_singular", TransformElement::expansion_singular(), fh_family(0), &free_eq,
         0.45},
        {"osc_to_free", TransformElement::osc_to_free(), fh_family(2), &osc_eq, 0.3},
        {"free_to_osc", TransformElement::free_to_osc(), hh_family(2), &free_eq, 0.5},
        {"oscillator_half_period", TransformElement::oscillator_half_period(), hh_family(1),
         &osc_eq, 0.6},
    };
    for (const auto& c : cases) {
        CAPTURE(c.label);
        const double r = residual_of_image(c.element.applied(c.input), *c.target, kGrid, c.t);
        CHECK(r < 1e-4);
    }
}

TEST_CASE("conjugated galilei maps oscillator solutions to oscillator solutions") {
    const auto conjugated =
        compose(TransformElement::osc_to_free(),
                compose(TransformElement::galilei(0.6), TransformElement::free_to_osc()));
    CHECK(conjugated.source() == EquationContext::oscillator());
    CHECK(conjugated.target() == EquationContext::oscillator());
    const CoefficientSet osc_eq = preset(Preset::Oscillator);
    for (double t : {-0.25, 0.1, 0.3}) {
        const double r = residual_of_image(conjugated.applied(hh_family(0)), osc_eq, kGrid, t);
        CHECK(r < 1e-4);
    }
}
