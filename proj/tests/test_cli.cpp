#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "oscgroup/grid.hpp"
#include "oscgroup/states.hpp"

namespace fs = std::filesystem;
using namespace oscgroup;

namespace {

const std::string cli = OSCGROUP_CLI_PATH;
const std::string scenario_dir = OSCGROUP_SCENARIO_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "oscgroup_cli_test";
        fs::create_directories(path);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("solve writes a deterministic trajectory") {
    TempDir tmp;
    const std::string base = "solve --preset oscillator --c0 1 "
                             "--init mu=1,alpha=0.3,beta=1.2,gamma=0,delta=0.5,epsilon=-0.2,kappa=0 "
                             "--t0 0 --t1 0.6 --step 0.01 --out ";
    CHECK(run(base + tmp.file("a.csv")) == 0);
    CHECK(run(base + tmp.file("b.csv")) == 0);
    const std::string a = slurp(tmp.file("a.csv"));
    CHECK(a == slurp(tmp.file("b.csv")));
    CHECK(a.rfind("t,mu,alpha,beta,gamma,delta,epsilon,kappa\n", 0) == 0);
    CHECK(a.find("\n0,1,0.3,1.2,0,0.5,-0.2,0\n") != std::string::npos);
}

TEST_CASE("wavefunction export carries unit norm") {
    TempDir tmp;
    const std::string out = tmp.file("psi.csv");
    CHECK(run("wavefunction --n 0 --preset oscillator --c0 1 --trivial-init --t 0.7 "
              "--grid -8:8:1/64 --out " + out) == 0);
    std::ifstream in(out);
    GridState gs = read_grid_csv(in);
    CHECK(gs.grid.n == 1025);
    CHECK(std::abs(grid_norm(gs) - 1.0) < 1e-8);
}

TEST_CASE("propagate accepts a grid CSV produced by wavefunction") {
    TempDir tmp;
    const std::string psi0 = tmp.file("psi0.csv");
    CHECK(run("wavefunction --n 0 --preset oscillator --c0 1 --trivial-init --t 0 "
              "--grid -12:12:1/64 --out " + psi0) == 0);
    const std::string out = tmp.file("prop.csv");
    CHECK(run("propagate --preset oscillator --c0 1 --in " + psi0 +
              " --t 0.7853981633974483 --grid -12:12:1/64 --out " + out) == 0);
    std::ifstream in(out);
    GridState gs = read_grid_csv(in);
    // at t = pi/4 the textbook ground state is e^{-i pi/4} pi^{-1/4} e^{-x^2/2}
    const std::size_t mid = gs.grid.n / 2;
    const std::complex<double> expected =
        std::polar(std::pow(std::numbers::pi, -0.25), -std::numbers::pi / 4);
    CHECK(std::abs(gs.values[mid] - expected) < 1e-6);
    CHECK(std::abs(grid_norm(gs) - 1.0) < 1e-6);
}

TEST_CASE("transform subcommand exports a grid") {
    TempDir tmp;
    const std::string out = tmp.file("free_image.csv");
    CHECK(run("transform --element free_to_osc --n 0 --t 0.4 --grid -8:8:1/64 --out " + out) ==
          0);
    std::ifstream in(out);
    GridState gs = read_grid_csv(in);
    CHECK(gs.grid.n == 1025);
    CHECK(grid_norm(gs) > 0.1);
}

TEST_CASE("density emits a t,x,abs2 table") {
    TempDir tmp;
    const std::string out = tmp.file("density.csv");
    CHECK(run("density --n 0 --preset oscillator --c0 1 "
              "--init mu=1,alpha=0.4,beta=1,gamma=0,delta=0.6,epsilon=0,kappa=0 "
              "--times 0:0.4:0.2 --grid -8:8:1/16 --out " + out) == 0);
    const std::string table = slurp(out);
    CHECK(table.rfind("t,x,abs2\n", 0) == 0);
    // 3 time levels over 257 points
    std::size_t rows = std::count(table.begin(), table.end(), '\n');
    CHECK(rows == 1 + 3 * 257);
    // the density of this dynamic state moves: compare |psi|^2 at x = 2
    // between t = 0 and t = 0.4
    double first = -1.0, last = -1.0;
    std::istringstream lines(table);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("0,2,", 0) == 0) first = std::stod(line.substr(4));
        if (line.rfind("0.4,2,", 0) == 0) last = std::stod(line.substr(6));
    }
    REQUIRE(first >= 0.0);
    REQUIRE(last >= 0.0);
    CHECK(std::abs(first - last) > 1e-4);
}

TEST_CASE("verify runs scenario suites with the documented exit codes") {
    TempDir tmp;
    const std::string report = tmp.file("report.csv");
    CHECK(run("verify --scenario " + scenario_dir + "/oscillator-textbook.cfg --out " + report) ==
          0);
    const std::string csv = slurp(report);
    CHECK(csv.rfind("check,value,threshold,pass\n", 0) == 0);
    CHECK(csv.find("closed_form") != std::string::npos);
    CHECK(csv.find(",0\n") == std::string::npos);  // nothing failed

    CHECK(run("verify --scenario " + scenario_dir + "/singular-window.cfg --out " +
              tmp.file("singular.csv")) == 1);
    CHECK(run("verify --scenario " + tmp.file("missing.cfg")) == 2);
}

TEST_CASE("usage and runtime errors map to exit codes 2 and 3") {
    TempDir tmp;
    CHECK(run("") == 2);                       // missing subcommand
    CHECK(run("solve --bogus") == 2);          // unknown flag
    CHECK(run("solve --t1 0.5 --a 'sin(' --out " + tmp.file("x.csv")) == 2);  // expression error
    CHECK(run("wavefunction --preset oscillator --c0 0 --t 0.5 --out " + tmp.file("y.csv")) ==
          3);                                  // family needs the Ermakov regime
    CHECK(run("green --preset oscillator --t 1.5707963267948966 --out " + tmp.file("g.csv")) ==
          3);                                  // caustic
}
