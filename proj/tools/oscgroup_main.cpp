// Command-line front end: solves the parameter systems, samples states and
// Green functions, propagates grids, applies group transforms, exports
// density tables, and runs scenario verification suites.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "oscgroup/transforms.hpp"
#include "oscgroup/verify.hpp"

using namespace oscgroup;

namespace {

struct CoefficientFlags {
    std::string preset_name;
    std::string a, b, c, d, f, g;
    int c0 = 0;
    double tol = 1e-10;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "integrator tolerance")
            ->check(CLI::Range(1e-14, 1e-6));
        cmd->add_option("--preset", preset_name, "free | oscillator | driven");
        cmd->add_option("--a", a, "coefficient a(t) expression");
        cmd->add_option("--b", b, "coefficient b(t) expression");
        cmd->add_option("--c", c, "coefficient c(t) expression");
        cmd->add_option("--d", d, "coefficient d(t) expression");
        cmd->add_option("--f", f, "coefficient f(t) expression");
        cmd->add_option("--g", g, "coefficient g(t) expression");
        cmd->add_option("--c0", c0, "regime flag: 0 Riccati, 1 Ermakov")
            ->check(CLI::Range(0, 1));
    }

    CoefficientSet build(double t_lo, double t_hi) const {
        Expr ea = Expr::constant(1), eb = Expr::constant(0), ec = Expr::constant(0),
             ed = Expr::constant(0), ef = Expr::constant(0), eg = Expr::constant(0);
        if (!preset_name.empty()) {
            if (preset_name == "oscillator" || preset_name == "driven") eb = Expr::constant(1);
            else if (preset_name != "free")
                throw DomainError(fmt::format("unknown preset '{}'", preset_name));
            if (preset_name == "driven" && f.empty())
                throw DomainError("driven preset needs --f");
        }
        if (!a.empty()) ea = Expr::parse(a);
        if (!b.empty()) eb = Expr::parse(b);
        if (!c.empty()) ec = Expr::parse(c);
        if (!d.empty()) ed = Expr::parse(d);
        if (!f.empty()) ef = Expr::parse(f);
        if (!g.empty()) eg = Expr::parse(g);
        const double pad = 0.2;
        return CoefficientSet::make(ea, eb, ec, ed, ef, eg, c0, std::min(0.0, t_lo) - pad,
                                    std::max(0.0, t_hi) + pad);
    }
};

KernelParameters parse_init(const std::string& spec) {
    KernelParameters p;
    if (spec.empty()) return p;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw DomainError(fmt::format("init entry '{}' is not key=value", item));
        const std::string key = item.substr(0, eq);
        const double value = std::stod(item.substr(eq + 1));
        if (key == "mu") p.mu = value;
        else if (key == "alpha") p.alpha = value;
        else if (key == "beta") p.beta = value;
        else if (key == "gamma") p.gamma = value;
        else if (key == "delta") p.delta = value;
        else if (key == "epsilon") p.epsilon = value;
        else if (key == "kappa") p.kappa = value;
        else throw DomainError(fmt::format("unknown init key '{}'", key));
    }
    return p;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError(fmt::format("cannot open output file '{}'", path));
    return out;
}

struct TimeRange {
    double t0 = 0.0, t1 = 1.0, dt = 0.05;
};

TimeRange parse_times(const std::string& spec) {
    auto first = spec.find(':');
    auto second = spec.rfind(':');
    if (first == std::string::npos || second == first)
        throw DomainError(fmt::format("times spec '{}' is not t0:t1:dt", spec));
    TimeRange r;
    r.t0 = std::stod(spec.substr(0, first));
    r.t1 = std::stod(spec.substr(first + 1, second - first - 1));
    const std::string step = spec.substr(second + 1);
    auto slash = step.find('/');
    r.dt = slash == std::string::npos
               ? std::stod(step)
               : std::stod(step.substr(0, slash)) / std::stod(step.substr(slash + 1));
    if (r.dt <= 0.0 || r.t1 < r.t0) throw DomainError("times spec needs t1 >= t0 and dt > 0");
    return r;
}

int run_solve(const CoefficientFlags& coeffs, const std::string& init_spec, double t0, double t1,
              double step, const std::string& out_path) {
    const KernelParameters init = parse_init(init_spec);
    const CoefficientSet cs = coeffs.build(std::min(t0, t1), std::max(t0, t1));
    CharacteristicData cd = solve_characteristic(cs, 1e-3, coeffs.tol);
    FundamentalSolution fs(cd);
    auto out = open_output(out_path);
    out << "t,mu,alpha,beta,gamma,delta,epsilon,kappa\n";
    for (double t = t0; t <= t1 + 1e-12; t += step) {
        KernelParameters p;
        if (std::abs(t) < 1e-12) {
            p = init;
            p.t = 0.0;
        } else {
            p = cs.c0 == 1 ? ermakov_general(fs, init, t) : riccati_general(fs, init, t);
        }
        out << fmt::format("{},{},{},{},{},{},{},{}\n", t, p.mu, p.alpha, p.beta, p.gamma,
                           p.delta, p.epsilon, p.kappa);
    }
    return 0;
}

int run_wavefunction(const CoefficientFlags& coeffs, const std::string& init_spec, int n, double t,
                     const std::string& grid_spec, const std::string& out_path) {
    if (coeffs.c0 != 1)
        throw DomainError("wavefunction families need --c0 1 (Ermakov regime)");
    const KernelParameters init = parse_init(init_spec);
    const CoefficientSet cs = coeffs.build(t, t);
    CharacteristicData cd = solve_characteristic(cs, 1e-3, coeffs.tol);
    FundamentalSolution fs(cd);
    const Grid grid = Grid::parse(grid_spec);
    const KernelParameters p =
        std::abs(t) < 1e-12 ? init : ermakov_general(fs, init, t);
    GridState gs = sample_state(
        [&](double x, double) { return oscillator_state(n, p, x); }, grid, t);
    auto out = open_output(out_path);
    write_grid_csv(out, gs);
    return 0;
}

int run_green(const CoefficientFlags& coeffs, double t, double y, const std::string& grid_spec,
              const std::string& out_path) {
    const CoefficientSet cs = coeffs.build(t, t);
    CharacteristicData cd = solve_characteristic(cs, 1e-3, coeffs.tol);
    FundamentalSolution fs(cd);
    const FundamentalPoint fp = fs.at(t);
    const Grid grid = Grid::parse(grid_spec);
    GridState gs = sample_state(
        [&](double x, double) { return green_function(fp, x, y); }, grid, t);
    auto out = open_output(out_path);
    write_grid_csv(out, gs);
    return 0;
}

int run_propagate(const CoefficientFlags& coeffs, const std::string& init_spec,
                  const std::string& in_path, int n, double t, const std::string& grid_spec,
                  const std::string& out_path) {
    const CoefficientSet cs = coeffs.build(t, t);
    CharacteristicData cd = solve_characteristic(cs, 1e-3, coeffs.tol);
    FundamentalSolution fs(cd);
    const Grid grid = Grid::parse(grid_spec);
    GridState initial;
    if (!in_path.empty()) {
        std::ifstream in(in_path);
        if (!in) throw DomainError(fmt::format("cannot open '{}'", in_path));
        initial = read_grid_csv(in);
    } else {
        KernelParameters start = parse_init(init_spec);
        start.t = 0.0;
        initial = sample_state(
            [&](double x, double) { return oscillator_state(n, start, x); }, grid, 0.0);
    }
    const PropagationResult result = propagate(fs.at(t), initial, grid);
    if (result.truncation_warning)
        std::cerr << fmt::format(
            "warning: initial data has magnitude {:.2e} at the grid edge; "
            "the propagation integral truncates it\n",
            result.edge_magnitude);
    auto out = open_output(out_path);
    write_grid_csv(out, result.psi);
    return 0;
}

int run_transform(const std::string& element_name, double par_v, double par_x0, double par_t0,
                  double par_l, double par_m, const std::string& init_spec, int n, double t,
                  const std::string& grid_spec, const std::string& out_path) {
    std::optional<TransformElement> element;
    if (element_name == "galilei") element = TransformElement::galilei(par_v, par_x0, par_t0);
    else if (element_name == "dilatation") element = TransformElement::dilatation(par_l);
    else if (element_name == "expansion") element = TransformElement::expansion(par_m);
    else if (element_name == "expansion_singular")
        element = TransformElement::expansion_singular();
    else if (element_name == "osc_to_free") element = TransformElement::osc_to_free();
    else if (element_name == "free_to_osc") element = TransformElement::free_to_osc();
    else if (element_name == "osc_half_period")
        element = TransformElement::oscillator_half_period();
    else throw DomainError(fmt::format("unknown transform element '{}'", element_name));

    const KernelParameters init = parse_init(init_spec);
    // input solutions of the element's source equation
    const SpaceTimeFn input =
        element->source() == EquationContext::oscillator()
            ? closed_form_state_family(ClosedFormCase::OscToOsc, init, n)
            : closed_form_state_family(ClosedFormCase::FreeToOsc, init, n);
    const Grid grid = Grid::parse(grid_spec);
    GridState image = sample_state(element->applied(input), grid, t);
    auto out = open_output(out_path);
    write_grid_csv(out, image);
    return 0;
}

int run_density(const CoefficientFlags& coeffs, const std::string& init_spec, int n,
                const std::string& times_spec, const std::string& grid_spec,
                const std::string& out_path) {
    if (coeffs.c0 != 1) throw DomainError("density export needs --c0 1 (Ermakov regime)");
    const TimeRange times = parse_times(times_spec);
    const KernelParameters init = parse_init(init_spec);
    const CoefficientSet cs = coeffs.build(times.t0, times.t1);
    CharacteristicData cd = solve_characteristic(cs, 1e-3, coeffs.tol);
    FundamentalSolution fs(cd);
    const Grid grid = Grid::parse(grid_spec);
    auto out = open_output(out_path);
    out << "t,x,abs2\n";
    for (double t = times.t0; t <= times.t1 + 1e-12; t += times.dt) {
        const KernelParameters p =
            std::abs(t) < 1e-12 ? init : ermakov_general(fs, init, t);
        GridState gs = sample_state(
            [&](double x, double) { return oscillator_state(n, p, x); }, grid, t);
        for (std::size_t k = 0; k < grid.n; ++k)
            out << fmt::format("{},{},{}\n", t, grid.x(k), std::norm(gs.values[k]));
    }
    return 0;
}

int run_verify(const std::string& scenario_path, const std::string& out_path) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
    } catch (const Error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    }
    const Report report = run_suite(sc);
    if (!out_path.empty()) {
        auto out = open_output(out_path);
        write_report_csv(out, report);
    }
    write_report_text(std::cout, report);
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized harmonic oscillator groups: parameter systems, states, transforms"};
    app.require_subcommand(1);

    CoefficientFlags coeffs;
    std::string init_spec, grid_spec = "-8:8:1/64", out_path, in_path;
    std::string element_name, scenario_path, times_spec = "0:1:0.05";
    bool trivial_init = false;
    int n = 0;
    double t = 0.5, t0 = 0.0, t1 = 1.0, step = 0.01, y = 0.0;
    double par_v = 0.0, par_x0 = 0.0, par_t0 = 0.0, par_l = 1.0, par_m = 0.0;

    auto add_common = [&](CLI::App* cmd, bool with_coeffs = true) {
        if (with_coeffs) coeffs.attach(cmd);
        cmd->add_option("--out", out_path, "output CSV path")->required();
    };

    CLI::App* solve = app.add_subcommand("solve", "parameter trajectory CSV");
    add_common(solve);
    solve->add_option("--init", init_spec, "initial data, e.g. mu=1,alpha=0.3");
    solve->add_flag("--trivial-init", trivial_init, "use mu=beta=1, rest 0");
    solve->add_option("--t0", t0);
    solve->add_option("--t1", t1)->required();
    solve->add_option("--step", step);

    CLI::App* wavefunction = app.add_subcommand("wavefunction", "sample a family state");
    add_common(wavefunction);
    wavefunction->add_option("--n", n, "state order");
    wavefunction->add_option("--init", init_spec);
    wavefunction->add_flag("--trivial-init", trivial_init);
    wavefunction->add_option("--t", t)->required();
    wavefunction->add_option("--grid", grid_spec);

    CLI::App* green = app.add_subcommand("green", "sample G(x, y, t) over x");
    add_common(green);
    green->add_option("--t", t)->required();
    green->add_option("--y", y, "source position");
    green->add_option("--grid", grid_spec);

    CLI::App* propagate_cmd = app.add_subcommand("propagate", "integrate against the kernel");
    add_common(propagate_cmd);
    propagate_cmd->add_option("--in", in_path, "initial grid CSV (defaults to a family state)");
    propagate_cmd->add_option("--n", n);
    propagate_cmd->add_option("--init", init_spec);
    propagate_cmd->add_flag("--trivial-init", trivial_init);
    propagate_cmd->add_option("--t", t)->required();
    propagate_cmd->add_option("--grid", grid_spec);

    CLI::App* transform = app.add_subcommand("transform", "apply a group element to a family");
    transform->add_option("--element", element_name,
                          "galilei | dilatation | expansion | expansion_singular | "
                          "osc_to_free | free_to_osc | osc_half_period")
        ->required();
    transform->add_option("--V", par_v, "galilei velocity");
    transform->add_option("--x0", par_x0, "galilei shift");
    transform->add_option("--t0", par_t0, "galilei time shift");
    transform->add_option("--l", par_l, "dilatation factor");
    transform->add_option("--m", par_m, "expansion parameter");
    transform->add_option("--n", n);
    transform->add_option("--init", init_spec);
    transform->add_option("--t", t)->required();
    transform->add_option("--grid", grid_spec);
    transform->add_option("--out", out_path)->required();

    CLI::App* density = app.add_subcommand("density", "|psi|^2 time series table");
    add_common(density);
    density->add_option("--n", n);
    density->add_option("--init", init_spec);
    density->add_flag("--trivial-init", trivial_init);
    density->add_option("--times", times_spec, "t0:t1:dt");
    density->add_option("--grid", grid_spec);

    CLI::App* verify = app.add_subcommand("verify", "run a scenario check suite");
    verify->add_option("--scenario", scenario_path, "scenario file")->required();
    verify->add_option("--out", out_path, "report CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*solve) return run_solve(coeffs, init_spec, t0, t1, step, out_path);
        if (*wavefunction)
            return run_wavefunction(coeffs, init_spec, n, t, grid_spec, out_path);
        if (*green) return run_green(coeffs, t, y, grid_spec, out_path);
        if (*propagate_cmd)
            return run_propagate(coeffs, init_spec, in_path, n, t, grid_spec, out_path);
        if (*transform)
            return run_transform(element_name, par_v, par_x0, par_t0, par_l, par_m, init_spec, n,
                                 t, grid_spec, out_path);
        if (*density) return run_density(coeffs, init_spec, n, times_spec, grid_spec, out_path);
        if (*verify) return run_verify(scenario_path, out_path);
    } catch (const ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
