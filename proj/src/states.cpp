#include "oscgroup/states.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace oscgroup {

namespace {

constexpr double kPi = std::numbers::pi;

// Normalized Hermite function phi_n(u) = H_n(u) e^{-u^2/2} / sqrt(2^n n! sqrt(pi)).
// The normalized recurrence stays bounded for every order supported here,
// where H_n and 2^n n! individually overflow around n ~ 150.
double normalized_hermite(int n, double u) {
    double prev = 0.0;
    double cur = std::exp(-0.5 * u * u) / std::pow(kPi, 0.25);
    for (int k = 0; k < n; ++k) {
        double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// runs `body(i)` over [0, n), parallel or serial; exceptions are collected
// and rethrown after the loop so they never cross the OpenMP boundary
template <typename Body>
void for_each_index(std::size_t n, Exec exec, const Body& body) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error = nullptr;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

double hermite(int n, double x) {
    if (n < 0 || n > 200) throw DomainError("hermite order must lie in [0, 200]");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::complex<double> oscillator_state(int n, const KernelParameters& p, double x) {
    if (n < 0 || n > 200) throw DomainError("state order must lie in [0, 200]");
    if (p.mu <= 0.0)
        throw SingularTime(fmt::format("mu = {} is not positive (past a caustic?)", p.mu));
    if (p.beta == 0.0) throw DomainError("beta must be nonzero");
    const double u = p.beta * x + p.epsilon;
    const double phase = p.alpha * x * x + p.delta * x + p.kappa + (2 * n + 1) * p.gamma;
    return std::polar(normalized_hermite(n, u) / std::sqrt(p.mu), phase);
}

SpaceTimeFn ermakov_state_family(const FundamentalSolution& fs, KernelParameters init, int n) {
    const FundamentalSolution* fsp = &fs;
    return [fsp, init, n](double x, double t) {
        return oscillator_state(n, ermakov_general(*fsp, init, t), x);
    };
}

SpaceTimeFn closed_form_state_family(ClosedFormCase which, KernelParameters init, int n) {
    return [which, init, n](double x, double t) {
        return oscillator_state(n, closed_form_params(which, init, t), x);
    };
}

std::complex<double> green_function(const FundamentalPoint& fp, double x, double y) {
    // below ~1e-8 the solved mu0 is dominated by integration error, so the
    // kernel coefficients cannot be certified; reject as a caustic
    if (std::abs(fp.mu0) < 1e-8)
        throw SingularTime(fmt::format("Green function singular: mu0 ~ 0 at t={}", fp.t));
    const std::complex<double> root =
        std::sqrt(std::complex<double>(0.0, 2.0 * kPi * fp.mu0));  // principal branch
    const double phase = fp.alpha0 * x * x + fp.beta0 * x * y + fp.gamma0 * y * y + fp.delta0 * x +
                         fp.epsilon0 * y + fp.kappa0;
    return std::polar(1.0, phase) / root;
}

GridState sample_state(const SpaceTimeFn& f, const Grid& grid, double t, Exec exec) {
    GridState out(grid, t);
    for_each_index(grid.n, exec,
                   [&](std::size_t k) { out.values[k] = f(grid.x(k), t); });
    return out;
}

PropagationResult propagate(const FundamentalPoint& fp, const GridState& initial,
                            const Grid& target, Exec exec) {
    const Grid& src = initial.grid;
    if (src.n < 8) throw GridTooCoarse("initial grid needs at least 8 samples");
    if (std::abs(fp.mu0) < 1e-8)
        throw SingularTime(fmt::format("propagation to a caustic at t={}", fp.t));
    PropagationResult result;
    result.edge_magnitude =
        std::max(std::abs(initial.values.front()), std::abs(initial.values.back()));
    result.truncation_warning = result.edge_magnitude >= 1e-12;

    // per-source factors independent of the target point
    std::vector<std::complex<double>> weighted(src.n);
    for (std::size_t k = 0; k < src.n; ++k) {
        const double y = src.x(k);
        const double w = (k == 0 || k == src.n - 1) ? 0.5 * src.dx : src.dx;
        weighted[k] =
            w * initial.values[k] * std::polar(1.0, fp.gamma0 * y * y + fp.epsilon0 * y);
    }
    const std::complex<double> prefactor =
        1.0 / std::sqrt(std::complex<double>(0.0, 2.0 * kPi * fp.mu0));

    result.psi = GridState(target, fp.t);
    for_each_index(target.n, exec, [&](std::size_t i) {
        const double x = target.x(i);
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < src.n; ++k)
            acc += weighted[k] * std::polar(1.0, fp.beta0 * x * src.x(k));
        result.psi.values[i] =
            prefactor * std::polar(1.0, fp.alpha0 * x * x + fp.delta0 * x + fp.kappa0) * acc;
    });
    return result;
}

double grid_norm(const GridState& gs) {
    double acc = 0.0;
    for (std::size_t k = 0; k < gs.grid.n; ++k) {
        const double w = (k == 0 || k == gs.grid.n - 1) ? 0.5 : 1.0;
        acc += w * std::norm(gs.values[k]);
    }
    return std::sqrt(acc * gs.grid.dx);
}

namespace {

// 4th-order first derivative: central 5-point stencil inside, one-sided
// 5-point stencils at the two points near each edge
std::vector<std::complex<double>> derivative4(const std::vector<std::complex<double>>& v,
                                              double h) {
    const std::size_t n = v.size();
    if (n < 5) throw GridTooCoarse("derivative needs at least 5 samples");
    std::vector<std::complex<double>> d(n);
    const double inv12h = 1.0 / (12.0 * h);
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * inv12h;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * inv12h;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * inv12h;
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) *
               inv12h;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] +
                3.0 * v[n - 5]) *
               inv12h;
    return d;
}

}  // namespace

GridState invariant_apply(const KernelParameters& p, double lambda, const GridState& gs) {
    if (p.beta == 0.0) throw DomainError("beta must be nonzero");
    const std::size_t n = gs.grid.n;
    const std::complex<double> minus_i(0.0, -1.0);

    auto momentum_shift = [&](const std::vector<std::complex<double>>& v) {
        auto d = derivative4(v, gs.grid.dx);
        std::vector<std::complex<double>> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double x = gs.grid.x(k);
            out[k] = minus_i * d[k] - (2.0 * p.alpha * x + p.delta) * v[k];
        }
        return out;
    };

    auto once = momentum_shift(gs.values);
    auto twice = momentum_shift(once);

    GridState out(gs.grid, gs.t);
    const double inv_beta2 = 1.0 / (p.beta * p.beta);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = p.beta * gs.grid.x(k) + p.epsilon;
        out.values[k] = 0.5 * lambda * (twice[k] * inv_beta2 + u * u * gs.values[k]);
    }
    return out;
}

double energy_expectation(const KernelParameters& p, double lambda, const GridState& gs) {
    GridState e = invariant_apply(p, lambda, gs);
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < gs.grid.n; ++k) {
        const double w = (k == 0 || k == gs.grid.n - 1) ? 0.5 : 1.0;
        acc += w * std::conj(gs.values[k]) * e.values[k];
    }
    return (acc * gs.grid.dx).real();
}

}  // namespace oscgroup
