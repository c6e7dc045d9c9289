#include "oscgroup/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace oscgroup {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

CoefficientSet Scenario::preset_default() { return oscgroup::preset(Preset::Oscillator); }

Scenario parse_scenario(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw DomainError(fmt::format("scenario line {} is not 'key = value'", lineno));
        kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
    }

    Scenario sc;
    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("name")) sc.name = *v;

    int c0 = 0;
    if (auto v = take("c0")) c0 = std::stoi(*v);

    Expr a = Expr::constant(1), b = Expr::constant(0), c = Expr::constant(0),
         d = Expr::constant(0), f = Expr::constant(0), g = Expr::constant(0);
    if (auto v = take("preset")) {
        sc.preset = *v;
        if (*v == "free") {
            // defaults above
        } else if (*v == "oscillator" || *v == "driven") {
            b = Expr::constant(1);
        } else {
            throw DomainError(fmt::format("unknown preset '{}'", *v));
        }
    }
    if (auto v = take("a")) a = Expr::parse(*v);
    if (auto v = take("b")) b = Expr::parse(*v);
    if (auto v = take("c")) c = Expr::parse(*v);
    if (auto v = take("d")) d = Expr::parse(*v);
    if (auto v = take("f")) f = Expr::parse(*v);
    if (auto v = take("g")) g = Expr::parse(*v);

    if (auto v = take("t0")) sc.t0 = std::stod(*v);
    if (auto v = take("t1")) sc.t1 = std::stod(*v);
    if (auto v = take("step")) sc.step = std::stod(*v);

    const double pad = 0.1 + 3e-3;  // room for finite-difference stencils
    const double lo = std::min({0.0, sc.t0, sc.t1}) - pad;
    const double hi = std::max({0.0, sc.t0, sc.t1}) + pad;
    sc.coefficients = CoefficientSet::make(a, b, c, d, f, g, c0, lo, hi);

    if (auto v = take("init.mu")) sc.init.mu = std::stod(*v);
    if (auto v = take("init.alpha")) sc.init.alpha = std::stod(*v);
    if (auto v = take("init.beta")) sc.init.beta = std::stod(*v);
    if (auto v = take("init.gamma")) sc.init.gamma = std::stod(*v);
    if (auto v = take("init.delta")) sc.init.delta = std::stod(*v);
    if (auto v = take("init.epsilon")) sc.init.epsilon = std::stod(*v);
    if (auto v = take("init.kappa")) sc.init.kappa = std::stod(*v);

    if (auto v = take("grid")) sc.grid = Grid::parse(*v);
    if (auto v = take("n")) sc.order = std::stoi(*v);

    if (auto v = take("checks")) {
        std::istringstream list(*v);
        std::string item;
        while (std::getline(list, item, ',')) {
            item = trim(item);
            if (!item.empty()) sc.checks.push_back(item);
        }
    }

    if (!kv.empty())
        throw DomainError(fmt::format("unknown scenario key '{}'", kv.begin()->first));
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(fmt::format("cannot open scenario file '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace oscgroup
