#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oscgroup/kernel_systems.hpp"
#include "ode_oracle.hpp"
#include "test_support.hpp"

using namespace oscgroup;
using namespace oscgroup::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
    CoefficientSet free_cs = preset(Preset::Free);
    CoefficientSet osc_cs = preset(Preset::Oscillator);
    CharacteristicData free_cd = solve_characteristic(free_cs, 1e-3, 1e-12);
    CharacteristicData osc_cd = solve_characteristic(osc_cs, 1e-3, 1e-12);
    FundamentalSolution free_fs{free_cd};
    FundamentalSolution osc_fs{osc_cd};
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("fundamental solution of the free particle") {
    const FundamentalPoint fp = fixture().free_fs.at(0.5);
    CHECK(fp.alpha0 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fp.beta0 == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(fp.gamma0 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fp.delta0 == 0.0);
    CHECK(fp.epsilon0 == 0.0);
    CHECK(fp.kappa0 == 0.0);
    CHECK(fp.lambda == 1.0);
}

TEST_CASE("fundamental solution of the oscillator at pi/8") {
    const FundamentalPoint fp = fixture().osc_fs.at(kPi / 8);
    CHECK(fp.alpha0 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fp.gamma0 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fp.beta0 == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("fundamental solution is singular at t = 0") {
    CHECK_THROWS_AS(fixture().free_fs.at(0.0), SingularTime);
}

TEST_CASE("driven delta0 against direct integration of its equation") {
    // oscillator with constant forcing f = 1
    CoefficientSet driven = preset(Preset::Driven, Expr::constant(1.0));
    CharacteristicData cd = solve_characteristic(driven, 1e-3, 1e-12);
    FundamentalSolution fs(cd, 1e-12);
    const double t_end = 0.3;
    const double delta0 = fs.at(t_end).delta0;

    // independent path: delta' = f + 2 g alpha0 - (c + 4 a alpha0) delta with
    // alpha0 = cos(2t) / (2 sin 2t) in closed form, started on the small-t
    // asymptote delta ~ t/2
    double t = 1e-6;
    double delta = 0.5 * t;
    const int steps = 60000;
    const double h = (t_end - t) / steps;
    auto rhs = [](double s, double dlt) {
        const double alpha0 = std::cos(2 * s) / (2 * std::sin(2 * s));
        return 1.0 - 4.0 * alpha0 * dlt;
    };
    for (int i = 0; i < steps; ++i) {
        const double k1 = rhs(t, delta);
        const double k2 = rhs(t + 0.5 * h, delta + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, delta + 0.5 * h * k2);
        const double k4 = rhs(t + h, delta + h * k3);
        delta += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    CHECK(std::abs(delta0 - delta) < 1e-7);
}

TEST_CASE("riccati general solution for the free particle") {
    KernelParameters init;
    init.mu = 1.0;
    init.alpha = 1.0;
    init.beta = 1.0;
    const KernelParameters p = riccati_general(fixture().free_fs, init, 1.0);
    CHECK(p.mu == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(p.alpha == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(p.beta == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(p.gamma == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(std::abs(p.delta) < 1e-12);
    CHECK(std::abs(p.epsilon) < 1e-12);
    CHECK(std::abs(p.kappa) < 1e-12);
}

TEST_CASE("both general solutions reduce to the initial data as t -> 0+") {
    for (int i = 0; i < 20; ++i) {
        const KernelParameters init = random_init();
        const KernelParameters r = riccati_general(fixture().osc_fs, init, 1e-6);
        CHECK(max_component_diff(r, init) < 1e-4);
        const KernelParameters e = ermakov_general(fixture().free_fs, init, 1e-6);
        CHECK(max_component_diff(e, init) < 1e-4);
    }
}

TEST_CASE("riccati oscillator case against the RK oracle") {
    KernelParameters init;
    init.delta = 1.0;  // (mu, alpha, beta, gamma, delta, eps, kappa) = (1,0,1,0,1,0,0)
    const double t = kPi / 8;
    const KernelParameters p = riccati_general(fixture().osc_fs, init, t);
    CHECK(p.delta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));  // 1 / cos(pi/4)
    CHECK(p.mu == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));

    const ParameterState oracle =
        rk4_parameter_system(fixture().osc_cs, to_state(init), 0.0, t, 4000);
    const ParameterState mine = to_state(p);
    for (int j = 0; j < 7; ++j) CHECK(std::abs(mine[j] - oracle[j]) < 1e-7);
}

TEST_CASE("ermakov free-particle case reproduces the arctan family") {
    KernelParameters init;  // trivial
    CoefficientSet free_c1 = preset(Preset::Free, std::nullopt, 1);
    const KernelParameters p = ermakov_general(fixture().free_fs, init, 1.0);
    CHECK(p.mu == doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
    CHECK(p.alpha == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(p.beta == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
    CHECK(p.gamma == doctest::Approx(-0.5 * std::atan(2.0)).epsilon(1e-9));
    CHECK(std::abs(p.delta) < 1e-12);
    CHECK(std::abs(p.epsilon) < 1e-12);
    CHECK(std::abs(p.kappa) < 1e-12);

    const ParameterState oracle = rk4_parameter_system(free_c1, to_state(init), 0.0, 1.0, 4000);
    const ParameterState mine = to_state(p);
    for (int j = 0; j < 7; ++j) CHECK(std::abs(mine[j] - oracle[j]) < 1e-8);
}

TEST_CASE("ermakov oscillator textbook trajectory") {
    KernelParameters init;  // trivial
    for (double t : {0.3, 0.7, 1.0, 1.4}) {
        const KernelParameters p = ermakov_general(fixture().osc_fs, init, t);
        CHECK(p.mu == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(p.alpha) < 1e-9);
        CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(p.gamma == doctest::Approx(-t).epsilon(1e-9));  // continuous through pi/4
        CHECK(std::abs(p.delta) < 1e-12);
    }
}

TEST_CASE("ermakov oscillator with general data against the RK oracle") {
    CoefficientSet osc_c1 = preset(Preset::Oscillator, std::nullopt, 1);
    KernelParameters init;
    init.mu = 1.0;
    init.alpha = 0.3;
    init.beta = 1.2;
    init.delta = 0.5;
    init.epsilon = -0.2;
    const double t = 0.4;
    const KernelParameters p = ermakov_general(fixture().osc_fs, init, t);
    const ParameterState oracle = rk4_parameter_system(osc_c1, to_state(init), 0.0, t, 4000);
    const ParameterState mine = to_state(p);
    for (int j = 0; j < 7; ++j) CHECK(std::abs(mine[j] - oracle[j]) < 1e-6);
}

TEST_CASE("closed-form spot values") {
    KernelParameters init;
    init.alpha = 1.0;
    const KernelParameters ff = closed_form_params(ClosedFormCase::FreeToFree, init, 1.0);
    CHECK(ff.mu == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ff.alpha == doctest::Approx(0.2).epsilon(1e-12));

    KernelParameters trivial;
    const KernelParameters hh = closed_form_params(ClosedFormCase::OscToOsc, trivial, 0.7);
    CHECK(hh.mu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(hh.alpha) < 1e-12);
    CHECK(hh.beta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hh.gamma == doctest::Approx(-0.7).epsilon(1e-12));

    const KernelParameters fh = closed_form_params(ClosedFormCase::FreeToOsc, trivial, 1.0);
    CHECK(fh.mu == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(fh.gamma == doctest::Approx(-0.5 * std::atan(2.0)).epsilon(1e-12));
}

namespace {

// rejection sampler for times where the relevant denominators stay away
// from zero
double singular_free_time(ClosedFormCase which, const KernelParameters& init) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const double t = uniform(0.03, which == ClosedFormCase::FreeToFree ||
                                               which == ClosedFormCase::FreeToOsc
                                           ? 1.2
                                           : 1.4);
        const double s = std::sin(2 * t), c = std::cos(2 * t);
        switch (which) {
            case ClosedFormCase::FreeToFree:
                if (std::abs(1 + 4 * init.alpha * t) > 0.15) return t;
                break;
            case ClosedFormCase::OscToFree:
                if (std::abs(2 * init.alpha * s + c) > 0.15 && std::abs(s) > 0.15) return t;
                break;
            case ClosedFormCase::FreeToOsc:
                return t;
            case ClosedFormCase::OscToOsc:
                if (std::abs(s) > 0.1) return t;
                break;
        }
    }
    return 0.1;
}

}  // namespace

TEST_CASE("closed forms are an oracle for the general solutions") {
    for (int i = 0; i < 12; ++i) {
        const KernelParameters init = random_init();
        for (int k = 0; k < 5; ++k) {
            {
                const double t = singular_free_time(ClosedFormCase::FreeToFree, init);
                const KernelParameters a = riccati_general(fixture().free_fs, init, t);
                const KernelParameters b = closed_form_params(ClosedFormCase::FreeToFree, init, t);
                CHECK(max_component_diff(a, b) < 1e-9);
            }
            {
                const double t = singular_free_time(ClosedFormCase::OscToFree, init);
                const KernelParameters a = riccati_general(fixture().osc_fs, init, t);
                const KernelParameters b = closed_form_params(ClosedFormCase::OscToFree, init, t);
                CHECK(max_component_diff(a, b) < 1e-9);
            }
            {
                const double t = singular_free_time(ClosedFormCase::FreeToOsc, init);
                const KernelParameters a = ermakov_general(fixture().free_fs, init, t);
                const KernelParameters b = closed_form_params(ClosedFormCase::FreeToOsc, init, t);
                CHECK(max_component_diff(a, b) < 1e-9);
            }
            {
                const double t = singular_free_time(ClosedFormCase::OscToOsc, init);
                const KernelParameters a = ermakov_general(fixture().osc_fs, init, t);
                const KernelParameters b = closed_form_params(ClosedFormCase::OscToOsc, init, t);
                CHECK(max_component_diff(a, b) < 1e-9);
            }
        }
    }
}

TEST_CASE("system residuals of the produced trajectories") {
    CoefficientSet osc_c1 = preset(Preset::Oscillator, std::nullopt, 1);
    KernelParameters init = random_init(1.0, 0.5, 1.5);
    auto traj = [&](double t) { return ermakov_general(fixture().osc_fs, init, t); };
    const auto res = system_residual(osc_c1, traj, 0.5);
    for (double r : res) CHECK(r < 1e-6);

    // frozen trajectory: d(gamma)/dt = 0 but a beta^2 != 0
    KernelParameters frozen = init;
    auto constant_traj = [&](double) { return frozen; };
    const auto cres = system_residual(osc_c1, constant_traj, 0.5);
    CHECK(cres[2] == doctest::Approx(frozen.beta * frozen.beta).epsilon(1e-12));

    // fundamental trajectory of the free particle
    auto fundamental = [&](double t) {
        const FundamentalPoint fp = fixture().free_fs.at(t);
        KernelParameters p;
        p.mu = fp.mu0;
        p.alpha = fp.alpha0;
        p.beta = fp.beta0;
        p.gamma = fp.gamma0;
        p.delta = fp.delta0;
        p.epsilon = fp.epsilon0;
        p.kappa = fp.kappa0;
        p.t = t;
        return p;
    };
    const auto fres = system_residual(fixture().free_cs, fundamental, 0.5);
    for (double r : fres) CHECK(r < 1e-8);
}

TEST_CASE("gauge identity along produced trajectories") {
    for (int i = 0; i < 8; ++i) {
        const KernelParameters init = random_init(1.5, 0.3, 1.8);
        for (double t : {0.2, 0.45, 0.7}) {
            const KernelParameters e = ermakov_general(fixture().osc_fs, init, t);
            CHECK(std::abs(e.beta * e.mu - init.beta * init.mu) < 1e-8);  // lambda == 1 here
            const double den = 1 + 4 * init.alpha * t;
            if (std::abs(den) > 0.2) {
                const KernelParameters r = riccati_general(fixture().free_fs, init, t);
                CHECK(std::abs(r.beta * r.mu - init.beta * init.mu) < 1e-8);
            }
        }
    }
}

TEST_CASE("alpha link: mu'/mu = 4 a alpha + 2 d by finite differences") {
    static constexpr double stencil[7] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
    const double h = 1e-3;
    const KernelParameters init = random_init(1.0, 0.5, 1.5);
    for (double t : {0.3, 0.6, 1.0}) {
        double dmu = 0.0;
        for (int k = -3; k <= 3; ++k)
            dmu += stencil[k + 3] * ermakov_general(fixture().osc_fs, init, t + k * h).mu;
        dmu /= 60.0 * h;
        const KernelParameters p = ermakov_general(fixture().osc_fs, init, t);
        CHECK(std::abs(dmu / p.mu - 4.0 * p.alpha) < 1e-6);  // a = 1, d = 0
    }
}

TEST_CASE("precondition and singularity errors") {
    KernelParameters bad;
    bad.beta = 0.0;
    CHECK_THROWS_AS(riccati_general(fixture().free_fs, bad, 0.5), DomainError);
    CHECK_THROWS_AS(ermakov_general(fixture().free_fs, bad, 0.5), DomainError);

    // a(0) < 0 is rejected for the Ermakov branch
    CoefficientSet neg_a = CoefficientSet::make(Expr::parse("-1"), Expr::constant(0),
                                                Expr::constant(0), Expr::constant(0),
                                                Expr::constant(0), Expr::constant(0), 1);
    CharacteristicData cd = solve_characteristic(neg_a);
    FundamentalSolution fs(cd);
    CHECK_THROWS_AS(ermakov_general(fs, KernelParameters{}, 0.5), DomainError);

    // driven integrals abort when mu0' vanishes inside the range (t = pi/4)
    CoefficientSet driven = preset(Preset::Driven, Expr::constant(1.0));
    CharacteristicData dcd = solve_characteristic(driven);
    FundamentalSolution dfs(dcd);
    CHECK_THROWS_AS(dfs.at(0.9), QuadratureError);
    CHECK_NOTHROW(dfs.at(0.5));
}

TEST_CASE("negative times: branch continuity and the sign convention") {
    // gamma is branch-continued through t = 0 from both sides; mu, beta and
    // epsilon flip sign jointly relative to the all-positive closed forms
    // (the composition multiplies by mu0 < 0 there), which downstream code
    // rejects wherever sqrt(mu) is required
    KernelParameters init;
    init.alpha = 0.2;
    init.beta = 1.1;
    init.delta = 0.4;
    init.epsilon = -0.3;
    for (double t : {-0.6, -0.25, -0.05}) {
        const KernelParameters e = ermakov_general(fixture().free_fs, init, t);
        const KernelParameters c = closed_form_params(ClosedFormCase::FreeToOsc, init, t);
        CHECK(e.gamma == doctest::Approx(c.gamma).epsilon(1e-9));
        CHECK(e.alpha == doctest::Approx(c.alpha).epsilon(1e-9));
        CHECK(e.delta == doctest::Approx(c.delta).epsilon(1e-9));
        CHECK(e.kappa == doctest::Approx(c.kappa).epsilon(1e-9));
        CHECK(e.mu == doctest::Approx(-c.mu).epsilon(1e-9));
        CHECK(e.beta == doctest::Approx(-c.beta).epsilon(1e-9));
        CHECK(e.epsilon == doctest::Approx(-c.epsilon).epsilon(1e-9));
        CHECK(e.mu < 0.0);
    }
    // the continued gamma approaches the initial value from the left as well
    const KernelParameters near0 = ermakov_general(fixture().free_fs, init, -1e-6);
    CHECK(std::abs(near0.gamma - init.gamma) < 1e-4);
}
