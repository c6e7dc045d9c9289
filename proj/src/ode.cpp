#include "oscgroup/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oscgroup {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;

constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Continuous-extension coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9, kFacMin = 0.2, kFacMax = 10.0;

}  // namespace

void DenseStep::eval(double t, double* y) const {
    const double h = t1_ - t0_;
    const double theta = (t - t0_) / h;
    const double theta1 = 1.0 - theta;
    const double* r1 = r_.data();
    const double* r2 = r1 + dim_;
    const double* r3 = r2 + dim_;
    const double* r4 = r3 + dim_;
    const double* r5 = r4 + dim_;
    for (std::size_t i = 0; i < dim_; ++i)
        y[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
}

void Dopri5::integrate(const OdeRhs& rhs, std::vector<double>& y, double t_begin, double t_end,
                       const std::function<void(const DenseStep&)>& on_step) const {
    const std::size_t n = y.size();
    if (t_begin == t_end) return;
    const double dir = t_end > t_begin ? 1.0 : -1.0;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yw(n), ynew(n);
    double t = t_begin;
    rhs(t, y.data(), k1.data());

    auto error_norm = [&](const std::vector<double>& ya, const std::vector<double>& yb,
                          const std::vector<double>& err) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double sc = atol + rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            double q = err[i] / sc;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<double>(n));
    };

    // initial step size: small fraction of the span, bounded by the state scale
    double h = initial_step;
    if (h == 0.0) {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        h = 0.01 * (ynorm + 1.0) / (fnorm + 1.0);
        h = std::min(h, 0.1 * std::abs(t_end - t_begin));
        h = std::max(h, 1e-8);
    }
    h = std::abs(h) * dir;

    bool rejected_last = false;
    std::vector<double> errv(n);
    for (long step = 0; step < max_steps; ++step) {
        bool last = false;
        if ((t + h - t_end) * dir >= 0.0) {
            h = t_end - t;
            last = true;
        }
        if (std::abs(h) <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw IntegrationError("step size underflow in Dopri5 (coefficient singularity?)");

        for (std::size_t i = 0; i < n; ++i) yw[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, yw.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) yw[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, yw.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, yw.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, yw.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            yw[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, yw.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t + h, ynew.data(), k7.data());  // FSAL

        for (std::size_t i = 0; i < n; ++i)
            errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        double err = error_norm(y, ynew, errv);

        if (err <= 1.0) {
            if (on_step) {
                DenseStep ds(t, t + h, n);
                double* r1 = ds.r_.data();
                double* r2 = r1 + n;
                double* r3 = r2 + n;
                double* r4 = r3 + n;
                double* r5 = r4 + n;
                for (std::size_t i = 0; i < n; ++i) {
                    double dy = ynew[i] - y[i];
                    double bspl = h * k1[i] - dy;
                    r1[i] = y[i];
                    r2[i] = dy;
                    r3[i] = bspl;
                    r4[i] = dy - h * k7[i] - bspl;
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
                }
                on_step(ds);
            }
            t += h;
            y.swap(ynew);
            k1.swap(k7);
            if (last) return;
            double fac = kSafety * std::pow(err > 0.0 ? err : 1e-16, -0.2);
            fac = std::min(rejected_last ? 1.0 : kFacMax, std::max(kFacMin, fac));
            h *= fac;
            rejected_last = false;
        } else {
            double fac = std::max(kFacMin, kSafety * std::pow(err, -0.2));
            h *= fac;
            rejected_last = true;
        }
    }
    throw IntegrationError("Dopri5 exceeded the step budget");
}

}  // namespace oscgroup
