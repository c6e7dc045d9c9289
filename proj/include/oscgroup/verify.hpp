#pragma once

#include <iosfwd>

#include "oscgroup/scenario.hpp"
#include "oscgroup/states.hpp"

namespace oscgroup {

// Complex samples on a uniform space-time lattice, time-major.
struct SampleBlock {
    Grid grid;
    double t0 = 0.0;   // first time level
    double dt = 1e-3;  // level spacing
    std::size_t nt = 0;
    std::vector<std::complex<double>> values;  // values[it * grid.n + ix]

    std::complex<double> at(std::size_t it, std::size_t ix) const {
        return values[it * grid.n + ix];
    }
    double time(std::size_t it) const { return t0 + static_cast<double>(it) * dt; }
};

// Samples psi over nt time levels centred at t_center.  Parallel across
// lattice points.
SampleBlock sample_block(const SpaceTimeFn& psi, const Grid& grid, double t_center,
                         std::size_t nt = 5, double dt = 1e-3, Exec exec = Exec::parallel);

// Relative L2 residual of  i psi_t + a psi_xx - b x^2 psi + i c x psi_x
// + i d psi + f x psi - i g psi_x  over interior lattice points, normalized
// by the L2 norm of i psi_t.  Space derivatives are 4th-order central,
// time 2nd-order central.  Throws GridTooCoarse below 9 space points or
// 5 time levels.
double pde_residual(const CoefficientSet& cs, const SampleBlock& psi);

struct CheckResult {
    std::string name;
    double value = 0.0;      // measured quantity (NaN when the check aborted)
    double threshold = 0.0;  // pass iff value < threshold
    bool pass = false;
    std::string note;        // error text for aborted checks
};

struct Report {
    std::string scenario;
    std::vector<CheckResult> checks;  // sorted by name
    bool all_pass() const;
};

// Runs the checks requested by the scenario (`all` expands to everything
// applicable to its c0/preset).  Errors thrown by a check are recorded as a
// failure for that check; the suite always completes.
Report run_suite(const Scenario& sc);

// `check,value,threshold,pass` rows, sorted by check name.
void write_report_csv(std::ostream& out, const Report& report);
void write_report_text(std::ostream& out, const Report& report);

}  // namespace oscgroup
