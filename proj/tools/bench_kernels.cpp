// Times the grid kernels in their serial reference form against the OpenMP
// path and reports the speedup.  Both paths produce bitwise-identical
// output, which is asserted here as well.

#include <fmt/format.h>

#include <chrono>
#include <cstdio>

#include "oscgroup/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace oscgroup;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

template <typename F>
double time_best_of(int reps, const F& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif

    CharacteristicData cd = solve_characteristic(preset(Preset::Oscillator), 1e-3, 1e-12);
    FundamentalSolution fs(cd);
    KernelParameters textbook;
    textbook.gamma = -0.3;

    std::printf("%-28s %10s %12s %12s %9s\n", "kernel", "points", "serial [s]", "parallel [s]",
                "speedup");

    for (double step : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        const Grid grid = Grid::over(-12.0, 12.0, step);
        GridState initial = sample_state(
            [&](double x, double) { return oscillator_state(0, KernelParameters{}, x); }, grid,
            0.0, Exec::serial);
        const FundamentalPoint fp = fs.at(0.4);

        PropagationResult serial_out, parallel_out;
        const double ts = time_best_of(2, [&] {
            serial_out = propagate(fp, initial, grid, Exec::serial);
        });
        const double tp = time_best_of(2, [&] {
            parallel_out = propagate(fp, initial, grid, Exec::parallel);
        });
        for (std::size_t k = 0; k < grid.n; ++k)
            if (serial_out.psi.values[k] != parallel_out.psi.values[k]) {
                std::fprintf(stderr, "propagate outputs diverge at %zu\n", k);
                return 1;
            }
        std::printf("%-28s %10zu %12.4f %12.4f %8.2fx\n",
                    fmt::format("propagate n^2 (dx={})", step).c_str(), grid.n, ts, tp, ts / tp);
    }

    {
        const Grid grid = Grid::over(-16.0, 16.0, 1.0 / 256);
        SpaceTimeFn family = ermakov_state_family(fs, KernelParameters{}, 3);
        SampleBlock serial_block, parallel_block;
        const double ts = time_best_of(3, [&] {
            serial_block = sample_block(family, grid, 0.4, 9, 1e-3, Exec::serial);
        });
        const double tp = time_best_of(3, [&] {
            parallel_block = sample_block(family, grid, 0.4, 9, 1e-3, Exec::parallel);
        });
        for (std::size_t i = 0; i < serial_block.values.size(); ++i)
            if (serial_block.values[i] != parallel_block.values[i]) {
                std::fprintf(stderr, "sample_block outputs diverge at %zu\n", i);
                return 1;
            }
        std::printf("%-28s %10zu %12.4f %12.4f %8.2fx\n", "sample_block (9 levels)",
                    grid.n * 9, ts, tp, ts / tp);
    }
    return 0;
}
