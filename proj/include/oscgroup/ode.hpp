#pragma once

#include <functional>
#include <vector>

#include "oscgroup/errors.hpp"

namespace oscgroup {

// Right-hand side of y' = f(t, y); writes the derivative into `dydt`.
using OdeRhs = std::function<void(double t, const double* y, double* dydt)>;

// One accepted step of the embedded Dormand-Prince 5(4) pair together with
// its fourth-order continuous extension, valid on [t0, t1] (t1 < t0 when
// integrating backwards).
class DenseStep {
public:
    DenseStep(double t0, double t1, std::size_t dim) : t0_(t0), t1_(t1), r_(5 * dim), dim_(dim) {}
    double t0() const { return t0_; }
    double t1() const { return t1_; }
    // Evaluates the interpolant at t (expected inside the step) into y.
    void eval(double t, double* y) const;

private:
    friend class Dopri5;
    double t0_, t1_;
    std::vector<double> r_;  // five contiguous coefficient blocks
    std::size_t dim_;
};

// Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4), FSAL).
// `on_step` is invoked once per accepted step; `y` holds the state at
// `t_end` on return.  Throws IntegrationError on step-size underflow.
class Dopri5 {
public:
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0.0;  // 0 = choose automatically
    long max_steps = 1000000;

    void integrate(const OdeRhs& rhs, std::vector<double>& y, double t_begin, double t_end,
                   const std::function<void(const DenseStep&)>& on_step = nullptr) const;
};

}  // namespace oscgroup
