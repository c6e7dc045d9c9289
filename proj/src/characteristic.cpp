#include "oscgroup/characteristic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "oscgroup/ode.hpp"
#include "oscgroup/quadrature.hpp"

namespace oscgroup {

namespace {

// cubic Hermite on [0, h] from endpoint values and derivatives
double hermite_value(double local, double h, double v0, double d0, double v1, double d1) {
    const double s = local / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * h * d1;
}

}  // namespace

const CharacteristicData::Node& CharacteristicData::left_node(double t, double& local) const {
    if (t < t_min() - 1e-12 || t > t_max() + 1e-12)
        throw DomainError(fmt::format("t={} outside the solved domain [{}, {}]", t, t_min(), t_max()));
    double pos = (t - nodes_.front().t) / step_;
    auto idx = static_cast<std::ptrdiff_t>(std::floor(pos));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nodes_.size()) - 2);
    local = t - nodes_[static_cast<std::size_t>(idx)].t;
    return nodes_[static_cast<std::size_t>(idx)];
}

double CharacteristicData::mu0(double t) const {
    double local;
    const Node& n = left_node(t, local);
    const Node& m = *(&n + 1);
    return hermite_value(local, step_, n.mu0, n.dmu0, m.mu0, m.dmu0);
}

double CharacteristicData::dmu0(double t) const {
    double local;
    const Node& n = left_node(t, local);
    const Node& m = *(&n + 1);
    return hermite_value(local, step_, n.dmu0, n.ddmu0, m.dmu0, m.ddmu0);
}

double CharacteristicData::mu1(double t) const {
    double local;
    const Node& n = left_node(t, local);
    const Node& m = *(&n + 1);
    return hermite_value(local, step_, n.mu1, n.dmu1, m.mu1, m.dmu1);
}

double CharacteristicData::dmu1(double t) const {
    double local;
    const Node& n = left_node(t, local);
    const Node& m = *(&n + 1);
    return hermite_value(local, step_, n.dmu1, n.ddmu1, m.dmu1, m.ddmu1);
}

int CharacteristicData::caustics_crossed(double t) const {
    int count = 0;
    if (t > 0.0) {
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            const Node& n = nodes_[i];
            if (n.t <= 0.0) continue;
            if (n.t > t) break;
            const Node& p = nodes_[i - 1];
            if (p.t >= 0.0 && p.mu0 != 0.0 && std::signbit(n.mu0) != std::signbit(p.mu0)) ++count;
        }
    } else if (t < 0.0) {
        for (std::size_t i = nodes_.size(); i-- > 1;) {
            const Node& n = nodes_[i - 1];
            if (n.t >= 0.0) continue;
            if (n.t < t) break;
            const Node& p = nodes_[i];
            if (p.t <= 0.0 && p.mu0 != 0.0 && std::signbit(n.mu0) != std::signbit(p.mu0)) ++count;
        }
    }
    return count;
}

CharacteristicData solve_characteristic(const CoefficientSet& cs, double grid_step, double rk_tol) {
    if (grid_step <= 0.0) throw DomainError("grid_step must be positive");
    if (rk_tol < 1e-14 || rk_tol > 1e-6)
        throw DomainError("rk_tol must lie in [1e-14, 1e-6]");

    const double a0 = cs.a.eval(0.0);
    if (a0 == 0.0) throw DomainError("a(0) must be nonzero");

    // y = (mu0, mu0', mu1, mu1');  mu'' = tau mu' - 4 sigma mu
    OdeRhs rhs = [&cs](double t, const double* y, double* dy) {
        auto [tau, sigma] = tau_sigma(cs, t);
        dy[0] = y[1];
        dy[1] = tau * y[1] - 4.0 * sigma * y[0];
        dy[2] = y[3];
        dy[3] = tau * y[3] - 4.0 * sigma * y[2];
    };

    auto second_derivatives = [&cs](double t, double mu0, double dmu0, double mu1, double dmu1,
                                    double& ddmu0, double& ddmu1) {
        auto [tau, sigma] = tau_sigma(cs, t);
        ddmu0 = tau * dmu0 - 4.0 * sigma * mu0;
        ddmu1 = tau * dmu1 - 4.0 * sigma * mu1;
    };

    // node k sits at exactly k * grid_step; the outermost nodes enclose the
    // requested domain so interpolation stays uniform
    const auto n_back = static_cast<long>(std::ceil(-cs.t_min / grid_step - 1e-9));
    const auto n_fwd = static_cast<long>(std::ceil(cs.t_max / grid_step - 1e-9));
    std::vector<CharacteristicData::Node> nodes(static_cast<std::size_t>(n_back + n_fwd + 1));
    auto node_at = [&](long k) -> CharacteristicData::Node& {
        return nodes[static_cast<std::size_t>(k + n_back)];
    };

    CharacteristicData::Node origin{};
    origin.t = 0.0;
    origin.mu0 = 0.0;
    origin.dmu0 = 2.0 * a0;
    origin.mu1 = 1.0;
    origin.dmu1 = 0.0;
    second_derivatives(0.0, origin.mu0, origin.dmu0, origin.mu1, origin.dmu1, origin.ddmu0,
                       origin.ddmu1);
    node_at(0) = origin;

    Dopri5 solver;
    solver.rtol = rk_tol;
    solver.atol = rk_tol;

    auto sweep = [&](long n_nodes, double direction) {
        if (n_nodes <= 0) return;
        const double t_end = direction * static_cast<double>(n_nodes) * grid_step;
        long next = 1;  // next node index (in units of direction * grid_step) to fill
        std::vector<double> y = {origin.mu0, origin.dmu0, origin.mu1, origin.dmu1};
        std::vector<double> interp(4);
        solver.integrate(rhs, y, 0.0, t_end, [&](const DenseStep& ds) {
            while (next <= n_nodes) {
                const double tn = direction * static_cast<double>(next) * grid_step;
                if ((tn - ds.t1()) * direction > 1e-12) break;
                ds.eval(tn, interp.data());
                CharacteristicData::Node node{};
                node.t = tn;
                node.mu0 = interp[0];
                node.dmu0 = interp[1];
                node.mu1 = interp[2];
                node.dmu1 = interp[3];
                second_derivatives(tn, node.mu0, node.dmu0, node.mu1, node.dmu1, node.ddmu0,
                                   node.ddmu1);
                node_at(static_cast<long>(direction) * next) = node;
                ++next;
            }
        });
    };

    sweep(n_fwd, +1.0);
    sweep(n_back, -1.0);

    return CharacteristicData(cs, a0, grid_step, std::move(nodes));
}

double wronskian_residual(const CharacteristicData& cd, double t) {
    const CoefficientSet& cs = cd.coefficients();
    double tau_integral =
        t == 0.0 ? 0.0
                 : integrate([&cs](double s) { return tau_sigma(cs, s).first; }, 0.0, t, 1e-12);
    double w = cd.mu0(t) * cd.dmu1(t) - cd.dmu0(t) * cd.mu1(t);
    return std::abs(w + 2.0 * cd.a0() * std::exp(tau_integral));
}

}  // namespace oscgroup
