#pragma once

#include <complex>
#include <random>

#include "oscgroup/kernel_systems.hpp"

namespace oscgroup::testing {

// fixed-seed engine so every run sees the same draws
inline std::mt19937& rng() {
    static std::mt19937 engine(0x5eed5u);
    return engine;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline KernelParameters random_init(double amplitude = 2.0, double beta_lo = 0.2,
                                    double beta_hi = 2.0) {
    KernelParameters p;
    p.mu = uniform(0.2, amplitude);
    p.alpha = uniform(-amplitude, amplitude);
    p.beta = uniform(beta_lo, beta_hi);
    p.gamma = uniform(-amplitude, amplitude);
    p.delta = uniform(-amplitude, amplitude);
    p.epsilon = uniform(-amplitude, amplitude);
    p.kappa = uniform(-amplitude, amplitude);
    return p;
}

inline double max_component_diff(const KernelParameters& a, const KernelParameters& b) {
    double worst = std::abs(a.mu - b.mu);
    worst = std::max(worst, std::abs(a.alpha - b.alpha));
    worst = std::max(worst, std::abs(a.beta - b.beta));
    worst = std::max(worst, std::abs(a.gamma - b.gamma));
    worst = std::max(worst, std::abs(a.delta - b.delta));
    worst = std::max(worst, std::abs(a.epsilon - b.epsilon));
    worst = std::max(worst, std::abs(a.kappa - b.kappa));
    return worst;
}

}  // namespace oscgroup::testing
