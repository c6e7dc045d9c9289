#pragma once

#include <vector>

#include "oscgroup/coefficients.hpp"

namespace oscgroup {

// Standard solutions mu0, mu1 of the homogeneous characteristic equation
//
//   mu'' - tau(t) mu' + 4 sigma(t) mu = 0,
//
// normalized by mu0(0) = 0, mu0'(0) = 2 a(0) and mu1(0) = 1, mu1'(0) = 0.
// Values, first and second derivatives are stored on a fine uniform grid and
// interpolated with cubic Hermite polynomials between nodes, so evaluation
// after construction is cheap, pure, and safe to share across threads.
class CharacteristicData {
public:
    double mu0(double t) const;
    double dmu0(double t) const;
    double mu1(double t) const;
    double dmu1(double t) const;
    double a0() const { return a0_; }

    const CoefficientSet& coefficients() const { return coeffs_; }
    double t_min() const { return nodes_.front().t; }
    double t_max() const { return nodes_.back().t; }

    // Number of sign changes of mu0 on (0, t] (caustic crossings); used for
    // branch continuation of the arctan in the Ermakov solution.
    int caustics_crossed(double t) const;

    struct Node {
        double t;
        double mu0, dmu0, ddmu0;
        double mu1, dmu1, ddmu1;
    };

private:
    friend CharacteristicData solve_characteristic(const CoefficientSet&, double, double);
    CharacteristicData(CoefficientSet cs, double a0, double step, std::vector<Node> nodes)
        : coeffs_(std::move(cs)), a0_(a0), step_(step), nodes_(std::move(nodes)) {}

    const Node& left_node(double t, double& local) const;

    CoefficientSet coeffs_;
    double a0_;
    double step_;
    std::vector<Node> nodes_;  // ascending t, uniform spacing step_
};

// Integrates the first-order system for (mu0, mu0', mu1, mu1') with an
// adaptive embedded Runge-Kutta pair from t = 0 both forward and backward
// over the coefficient domain.  Dense-output nodes are spaced <= grid_step.
CharacteristicData solve_characteristic(const CoefficientSet& cs, double grid_step = 1e-3,
                                        double rk_tol = 1e-10);

// |mu0 mu1' - mu0' mu1 + 2 a(0) exp(int_0^t tau)| -- the Abel identity for
// the Wronskian, evaluated with an independent quadrature of tau.
double wronskian_residual(const CharacteristicData& cd, double t);

}  // namespace oscgroup
