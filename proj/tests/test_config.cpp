#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nsfp/config.hpp"
#include "nsfp/driver.hpp"
#include "nsfp/errors.hpp"

using namespace nsfp;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "seed": 1,
  "domain": {"lower": [0, 0, 0], "upper": [1, 1, 1], "T": 1},
  "physics": {"mu": 1, "rho": 1},
  "forcing": {"preset": "zero"}
})";

std::string config_error_path(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key_path();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nsfp_test_config_" + name);
    fs::remove_all(p);
    return p;
}

RunConfig small_piece() {
    RunConfig c = parse_config(R"({
      "seed": 3,
      "domain": {"lower": [0, 0, 0], "upper": [0.25, 0.25, 0.25], "T": 0.5},
      "physics": {"mu": 0.05, "rho": 1},
      "grid": {"points": 5},
      "budget": {"M": 1e-4}
    })");
    return c;
}

}  // namespace

TEST_CASE("minimal document fills the defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.tau == 1.0);
    CHECK(c.tau * c.rho == 1.0);
    CHECK(c.seed == 1);
    CHECK(c.subcommand.empty());
    CHECK(c.domain.boxes.size() == 1);
    CHECK(c.domain.T == 1.0);
    CHECK(c.forcing.preset == "zero");
    CHECK(c.points == std::array<int, 4>{9, 9, 9, 9});
    CHECK(c.budget.M == 1.0);
    CHECK(c.budget.C == 2.0);
    CHECK(c.picard_tol > 0.0);
    CHECK(c.rank_tol > 0.0);
    CHECK(c.frequency_samples == 100);
    CHECK(c.forcing.center == Vec3{0.5, 0.5, 0.5});
}

TEST_CASE("rho equal to zero names rho") {
    CHECK(config_error_path(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                "physics": {"mu": 1, "rho": 0}})") == "physics.rho");
}

TEST_CASE("reciprocal density sets the specific volume") {
    const RunConfig c = parse_config(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                         "physics": {"mu": 1, "rho": 4}})");
    CHECK(c.tau == 0.25);
}

TEST_CASE("unknown, missing and invalid keys carry their path") {
    CHECK(config_error_path(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                "physics": {"mu": 1, "rho": 1}, "grid": {"pointz": 9}})") == "grid.pointz");
    CHECK(config_error_path(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                "physics": {"mu": 1, "rho": 1}, "colour": "red"})") == "colour");
    CHECK(config_error_path(R"({"domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                "physics": {"mu": 1, "rho": 1}})") == "seed");
    CHECK(config_error_path(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                "physics": {"rho": 1}})") == "physics.mu");
    CHECK(config_error_path(R"({"seed": 1, "domain": {"boxes": [{"lower": [0,0,0], "upper": [1,1]}], "T": 1},
                                "physics": {"mu": 1, "rho": 1}})") == "domain.boxes[0].upper");
    CHECK(config_error_path(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                "physics": {"mu": 1, "rho": 1}, "tolerances": {"picard_tol": -1}})") ==
          "tolerances.picard_tol");
    CHECK(config_error_path(R"({"seed": 1, "subcommand": "plot", "domain": {"lower": [0,0,0], "upper": [1,1,1],
                                "T": 1}, "physics": {"mu": 1, "rho": 1}})") == "subcommand");
    CHECK(config_error_path(R"({"seed": 1, "domain": {"boxes": [{"lower": [0,0,0], "upper": [1,1,1]},
                                {"lower": [0.5,0,0], "upper": [2,1,1]}], "T": 1},
                                "physics": {"mu": 1, "rho": 1}})") == "domain.boxes[1]");
    CHECK(config_error_path("{not json") == "<root>");
}

TEST_CASE("box unions and grid arrays are accepted") {
    const RunConfig c = parse_config(R"({"seed": 5, "domain": {"boxes": [{"lower": [0,0,0], "upper": [1,1,1]},
                                         {"lower": [1,0,0], "upper": [2,1,1]}], "T": 0.5},
                                         "physics": {"mu": 0.1, "rho": 2}, "grid": {"points": [5, 9, 7, 7]}})");
    CHECK(c.domain.boxes.size() == 2);
    CHECK(c.points == std::array<int, 4>{5, 9, 7, 7});
    CHECK(c.forcing.center == Vec3{1.0, 0.5, 0.5});
}

TEST_CASE("gaussian bump preset is evaluable and compactly supported") {
    const RunConfig c = parse_config(R"({"seed": 1, "domain": {"lower": [0,0,0], "upper": [1,1,1], "T": 1},
                                         "physics": {"mu": 1, "rho": 1},
                                         "forcing": {"preset": "gaussian-bump", "amplitude": 0.1}})");
    const VectorField F = make_forcing(c.forcing, c.domain);
    CHECK(std::abs(F[0](0.3, {0.5, 0.5, 0.5})) > 0.0);
    Grid g = c.grid_for(c.domain.boxes[0]);
    CHECK_NOTHROW(check_support(F, c.domain, g));
    // Beyond the radius the field is exactly zero.
    const double r = c.forcing.radius;
    for (int k = 0; k < 3; ++k) CHECK(F[k](0.3, {0.5 + 1.001 * r, 0.5, 0.5}) == 0.0);
    for (int k = 0; k < 3; ++k) CHECK(F[k](0.3, {0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("zero forcing solve converges at once with zero residuals") {
    RunConfig c = small_piece();
    c.subcommand = "solve";
    c.output = scratch("zero").string();
    const RunResult r = run(c);
    CHECK(r.exit_code == kExitPass);
    const std::string trace = slurp(fs::path(c.output) / "trace.csv");
    CHECK(trace == "iteration,delta,sup,holder,in_omega_c\n1,0,0,0,1\n");
    const std::string report = slurp(fs::path(c.output) / "solve_report.txt");
    CHECK(report.find("converged") != std::string::npos);
    CHECK(report.find("sup 0.000000e+00") != std::string::npos);
    CHECK(report.find("sup 1") == std::string::npos);
}

TEST_CASE("solve on a domain failing the smallness test is refused") {
    RunConfig c = parse_config(kMinimal);
    c.subcommand = "solve";
    c.output = scratch("refuse").string();
    const RunResult r = run(c);
    CHECK(r.exit_code == kExitRefused);
    const std::string report = slurp(fs::path(c.output) / "solve_report.txt");
    CHECK(report.find("smallness conditions") != std::string::npos);
    CHECK(report.find("decompose-solve") != std::string::npos);
    CHECK_FALSE(fs::exists(fs::path(c.output) / "trace.csv"));
}

TEST_CASE("frequency sweep certifies every sample") {
    RunConfig c = parse_config(kMinimal);
    c.subcommand = "freq-verify";
    c.output = scratch("freq").string();
    const RunResult r = run(c);
    CHECK(r.exit_code == kExitPass);
    std::istringstream csv(slurp(fs::path(c.output) / "freq_certificate.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        // rank is the fifth column
        std::istringstream cells(line);
        std::string cell;
        for (int i = 0; i < 5; ++i) std::getline(cells, cell, ',');
        CHECK(cell == "46");
    }
    CHECK(rows == 100);
}

TEST_CASE("identical configs give identical reports") {
    RunConfig c = small_piece();
    c.forcing.preset = "swirl-bump";
    c.forcing.amplitude = 1.0;
    c.forcing.center = {0.125, 0.125, 0.125};
    c.forcing.radius = 0.1;
    c.forcing.direction = {0, 0, 1};
    c.subcommand = "solve";
    c.output = scratch("det_a").string();
    run(c);
    RunConfig d = c;
    d.output = scratch("det_b").string();
    run(d);
    for (const char* f : {"solve_report.txt", "trace.csv", "fields.csv"})
        CHECK(slurp(fs::path(c.output) / f) == slurp(fs::path(d.output) / f));
}

TEST_CASE("module errors surface with the module name") {
    RunConfig c = small_piece();
    c.subcommand = "solve";
    c.forcing.preset = "polynomial-bump";
    c.forcing.amplitude = 1.0;
    c.forcing.center = {0.0, 0.0, 0.0};
    c.forcing.radius = 0.1;
    c.output = scratch("support").string();
    try {
        run(c);
        FAIL("expected a support error");
    } catch (const SupportError& e) {
        CHECK_FALSE(e.module().empty());
    }
}
