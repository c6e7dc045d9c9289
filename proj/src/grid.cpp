#include "oscgroup/grid.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace oscgroup {

namespace {

double parse_step(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return std::stod(std::string(s));
    double num = std::stod(std::string(s.substr(0, slash)));
    double den = std::stod(std::string(s.substr(slash + 1)));
    if (den == 0.0) throw DomainError("grid step denominator is zero");
    return num / den;
}

}  // namespace

Grid Grid::parse(std::string_view spec) {
    auto first = spec.find(':');
    auto second = spec.rfind(':');
    if (first == std::string_view::npos || second == first)
        throw DomainError(fmt::format("grid spec '{}' is not lo:hi:step", spec));
    try {
        double lo = std::stod(std::string(spec.substr(0, first)));
        double hi = std::stod(std::string(spec.substr(first + 1, second - first - 1)));
        double step = parse_step(spec.substr(second + 1));
        return over(lo, hi, step);
    } catch (const std::invalid_argument&) {
        throw DomainError(fmt::format("grid spec '{}' is not lo:hi:step", spec));
    }
}

Grid Grid::over(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) throw DomainError("grid requires hi > lo and step > 0");
    auto n = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
    if (n < 8) throw DomainError("grid needs at least 8 samples");
    return Grid{lo, step, n};
}

void write_grid_csv(std::ostream& out, const GridState& gs) {
    out << "x,re,im,abs2\n";
    for (std::size_t k = 0; k < gs.grid.n; ++k) {
        const auto v = gs.values[k];
        out << fmt::format("{},{},{},{}\n", gs.grid.x(k), v.real(), v.imag(), std::norm(v));
    }
}

GridState read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0)
        throw DomainError("grid CSV must start with an x,re,im[,abs2] header");
    std::vector<double> xs;
    std::vector<std::complex<double>> vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double col[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, cell, ','))
                throw DomainError("grid CSV row with fewer than 3 columns");
            col[i] = std::stod(cell);
        }
        xs.push_back(col[0]);
        vs.emplace_back(col[1], col[2]);
    }
    if (xs.size() < 8) throw DomainError("grid CSV needs at least 8 samples");
    const double dx = xs[1] - xs[0];
    for (std::size_t k = 1; k + 1 < xs.size(); ++k)
        if (std::abs((xs[k + 1] - xs[k]) - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
            throw DomainError("grid CSV spacing is not uniform");
    GridState gs(Grid{xs.front(), dx, xs.size()}, 0.0);
    gs.values = std::move(vs);
    return gs;
}

}  // namespace oscgroup
