#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "nsfp/fixed_point.hpp"
#include "nsfp/forcing.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp {

inline constexpr std::array<const char*, 6> kSubcommands = {"tableau-verify", "freq-verify", "greens-verify",
                                                            "bounds",         "solve",       "decompose-solve"};

struct RunConfig {
    std::string subcommand;  // may be left empty and supplied on the command line
    unsigned long long seed = 0;
    std::string output = "nsfp_out";

    Domain domain;
    double mu = 1.0;
    double rho = 1.0;
    double tau = 1.0;  // 1 / rho

    std::array<int, 4> points{9, 9, 9, 9};  // t, x1, x2, x3 nodes per piece
    int legendre_order = 16;
    int hermite_order = 10;
    int cells_per_axis = 64;  // pointwise potentials in greens-verify

    HolderBudget budget;
    double epsilon_trunc = 0.0;  // <= 0 selects 1e-2 T

    ForcingSpec forcing;

    double picard_tol = 1e-8;
    int max_iter = 50;
    double rank_tol = 1e-8;
    int refinement_levels = 3;
    int residual_margin = 0;  // 0 selects a quarter of the spatial nodes

    int frequency_samples = 100;
    int capacity_samples = 9;
    int partition_max_depth = 4;
    int holder_pairs = 2000;
    bool stop_on_budget = false;

    Grid grid_for(const Box& box) const;
    EngineSettings engine() const;
    PicardOptions picard_options() const;
    int margin_for(const Grid& g) const;
};

// Validated config from a JSON document. Throws ConfigError naming the offending key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Checks the invariants again after command-line overrides.
void validate(const RunConfig& c);

// Canonical text echo of everything that affects results (no output path).
std::string describe(const RunConfig& c);

}  // namespace nsfp
