#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oscgroup/verify.hpp"
#include "test_support.hpp"

using namespace oscgroup;
using namespace oscgroup::testing;

namespace {

constexpr double kPi = std::numbers::pi;

SpaceTimeFn textbook_family(int n) {
    return closed_form_state_family(ClosedFormCase::OscToOsc, KernelParameters{}, n);
}

const Grid kGrid = Grid::over(-8.0, 8.0, 1.0 / 64.0);

}  // namespace

TEST_CASE("pde residual of an exact oscillator solution is discretization noise") {
    CoefficientSet osc = preset(Preset::Oscillator, std::nullopt, 1);
    const SampleBlock block = sample_block(textbook_family(0), kGrid, 0.4);
    CHECK(pde_residual(osc, block) < 1e-4);
}

TEST_CASE("pde residual detects a non-solution") {
    CoefficientSet osc = preset(Preset::Oscillator, std::nullopt, 1);
    SpaceTimeFn tilted = [base = textbook_family(0)](double x, double t) {
        return (1.0 + 0.01 * x) * base(x, t);
    };
    const SampleBlock block = sample_block(tilted, kGrid, 0.4);
    CHECK(pde_residual(osc, block) > 1e-3);
}

TEST_CASE("free-particle family solves the free equation") {
    CoefficientSet fr = preset(Preset::Free);
    const SpaceTimeFn family =
        closed_form_state_family(ClosedFormCase::FreeToOsc, KernelParameters{}, 2);
    const SampleBlock block = sample_block(family, kGrid, 0.35);
    CHECK(pde_residual(fr, block) < 1e-4);
}

TEST_CASE("residual convergence with refinement") {
    // The 2nd-order time stencil dominates, so halving dx and dt divides the
    // residual by 4.  A sub-percent anti-phase admixture of the (16x faster)
    // space error keeps the measured ratio marginally below the asymptote,
    // hence the 3.9 gate.
    CoefficientSet osc = preset(Preset::Oscillator, std::nullopt, 1);
    const SpaceTimeFn family = textbook_family(1);
    const double coarse =
        pde_residual(osc, sample_block(family, Grid::over(-8, 8, 1.0 / 32), 0.4, 5, 2e-3));
    const double mid =
        pde_residual(osc, sample_block(family, Grid::over(-8, 8, 1.0 / 64), 0.4, 5, 1e-3));
    const double fine =
        pde_residual(osc, sample_block(family, Grid::over(-8, 8, 1.0 / 128), 0.4, 5, 5e-4));
    CAPTURE(coarse);
    CAPTURE(mid);
    CAPTURE(fine);
    CHECK(coarse >= 3.9 * mid);
    CHECK(mid >= 3.9 * fine);
    CHECK(fine < 1e-6);
}

TEST_CASE("stencil size guards") {
    CoefficientSet osc = preset(Preset::Oscillator);
    CHECK_THROWS_AS(pde_residual(osc, sample_block(textbook_family(0), kGrid, 0.4, 3)),
                    GridTooCoarse);
    SampleBlock tiny;
    tiny.grid = Grid{0.0, 0.1, 8};
    tiny.nt = 5;
    tiny.values.resize(40);
    CHECK_THROWS_AS(pde_residual(osc, tiny), GridTooCoarse);
}

TEST_CASE("sample blocks from serial and parallel paths match bitwise") {
    const SampleBlock a = sample_block(textbook_family(2), kGrid, 0.3, 5, 1e-3, Exec::parallel);
    const SampleBlock b = sample_block(textbook_family(2), kGrid, 0.3, 5, 1e-3, Exec::serial);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("suite: textbook oscillator scenario passes everything") {
    const Scenario sc = parse_scenario(R"(
# dynamic oscillator states with textbook initial data
name = oscillator-textbook
preset = oscillator
c0 = 1
t0 = 0.1
t1 = 0.6
step = 0.1
checks = all
)");
    const Report report = run_suite(sc);
    REQUIRE(report.checks.size() > 8);
    for (const auto& c : report.checks) {
        CAPTURE(c.name);
        CAPTURE(c.value);
        CAPTURE(c.note);
        CHECK(c.pass);
    }
    CHECK(report.all_pass());
    // report is sorted by name
    for (std::size_t i = 1; i < report.checks.size(); ++i)
        CHECK(report.checks[i - 1].name < report.checks[i].name);
}

TEST_CASE("suite: singular window is recorded as a failure, not an abort") {
    Scenario sc = parse_scenario(R"(
name = singular-window
preset = oscillator
c0 = 0
t0 = 0.3
t1 = 0.9
step = 0.3
checks = transform_residual
)");
    // t = 0.9 > 0.9 * pi/4: the cos/tan substitution is singular there
    const Report report = run_suite(sc);
    REQUIRE(report.checks.size() == 1);
    CHECK_FALSE(report.checks[0].pass);
    CHECK(report.checks[0].note.find("singular") != std::string::npos);
    CHECK_FALSE(report.all_pass());
}

TEST_CASE("suite: empty scenario runs zero checks and passes") {
    const Report report = run_suite(parse_scenario(""));
    CHECK(report.checks.empty());
    CHECK(report.all_pass());
}

TEST_CASE("suite: unknown check names fail honestly") {
    Scenario sc = parse_scenario("checks = no_such_check");
    const Report report = run_suite(sc);
    REQUIRE(report.checks.size() == 1);
    CHECK_FALSE(report.checks[0].pass);
    CHECK(report.checks[0].note == "unknown check name");
}

TEST_CASE("report serialization") {
    Report report;
    report.scenario = "demo";
    report.checks.push_back({"alpha", 1e-9, 1e-6, true, ""});
    report.checks.push_back({"beta", 2.0, 1.0, false, "too big"});
    std::ostringstream csv;
    write_report_csv(csv, report);
    CHECK(csv.str() == "check,value,threshold,pass\nalpha,1e-09,1e-06,1\nbeta,2,1,0\n");
    std::ostringstream text;
    write_report_text(text, report);
    CHECK(text.str().find("[PASS] alpha") != std::string::npos);
    CHECK(text.str().find("[FAIL] beta") != std::string::npos);
}

TEST_CASE("scenario parsing errors") {
    CHECK_THROWS_AS(parse_scenario("nonsense line"), DomainError);
    CHECK_THROWS_AS(parse_scenario("unknown_key = 3"), DomainError);
    CHECK_THROWS_AS(parse_scenario("preset = wavelet"), DomainError);
    const Scenario sc = parse_scenario("a = exp(t)\nb = sin(2*t)\nc0 = 1\ninit.beta = 1.5");
    CHECK(sc.coefficients.a.eval(1.0) == doctest::Approx(std::exp(1.0)));
    CHECK(sc.coefficients.c0 == 1);
    CHECK(sc.init.beta == 1.5);
    CHECK_FALSE(sc.preset.has_value());
}
