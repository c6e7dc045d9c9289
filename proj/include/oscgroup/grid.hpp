#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "oscgroup/errors.hpp"

namespace oscgroup {

// Execution policy for the data-parallel grid kernels.  `parallel` runs the
// OpenMP path; `serial` runs the reference loop kept for testing.  Outputs
// are bitwise identical: parallelism is only ever across independent output
// elements and reductions stay sequential.
enum class Exec { serial, parallel };

struct Grid {
    double x0 = 0.0;   // left endpoint
    double dx = 1.0;   // uniform spacing, > 0
    std::size_t n = 0; // sample count, >= 8

    double x(std::size_t k) const { return x0 + static_cast<double>(k) * dx; }
    double x_last() const { return x(n - 1); }

    // "lo:hi:step" with step either a decimal or a fraction like 1/64
    static Grid parse(std::string_view spec);
    static Grid over(double lo, double hi, double step);
};

// Complex samples of a wave function on a uniform spatial grid at one time.
struct GridState {
    Grid grid;
    double t = 0.0;
    std::vector<std::complex<double>> values;

    GridState() = default;
    GridState(const Grid& g, double time) : grid(g), t(time), values(g.n) {}
};

// CSV schema: header "x,re,im,abs2", one row per sample, shortest
// round-trip decimal floats (<= 17 significant digits).
void write_grid_csv(std::ostream& out, const GridState& gs);
GridState read_grid_csv(std::istream& in);

}  // namespace oscgroup
