#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscgroup/coefficients.hpp"
#include "oscgroup/grid.hpp"
#include "oscgroup/kernel_systems.hpp"

namespace oscgroup {

// Line-based `key = value` scenario description.  Keys:
//   name                       label used in reports
//   preset                     free | oscillator | driven
//   a b c d f g                coefficient expressions (override the preset)
//   c0                         0 or 1
//   init.mu ... init.kappa     initial parameter data (defaults 1,0,1,0,0,0,0)
//   t0 t1 step                 sample-time window
//   grid                       lo:hi:step
//   n                          state order used by grid checks
//   checks                     comma list of check names, or `all`
// Empty lines and lines starting with '#' are ignored.  A scenario without
// a `checks` key runs no checks.
struct Scenario {
    std::string name = "scenario";
    std::optional<std::string> preset;
    CoefficientSet coefficients = preset_default();
    KernelParameters init;
    double t0 = 0.05;
    double t1 = 0.8;
    double step = 0.05;
    Grid grid = Grid::over(-8.0, 8.0, 1.0 / 64.0);
    int order = 0;
    std::vector<std::string> checks;

    static CoefficientSet preset_default();
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace oscgroup
