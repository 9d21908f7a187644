#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nsfp/config.hpp"
#include "nsfp/fixed_point.hpp"
#include "nsfp/reconstruction.hpp"
#include "nsfp/spectral.hpp"
#include "nsfp/tableau.hpp"

namespace nsfp {

struct RunOptions {
    bool override_smallness = false;
};

// Exit codes: 0 tier passed, 1 checks failed or no convergence, 3 refused by the smallness test.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitRefused = 3;

struct RunResult {
    int exit_code = kExitPass;
    std::vector<std::filesystem::path> files;
    std::string summary;
};

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};
std::string format_checks(const std::vector<Check>& checks);

struct FrequencySweep {
    std::vector<FrequencyRecord> records;
    int full_rank_count = 0;  // records with rank 46
    double max_null = 0.0, max_particular = 0.0, max_divergence = 0.0;
};
// Samples frequencies and forcing amplitudes from the seed and certifies each one.
FrequencySweep frequency_sweep(const ConstantTableau& t, int count, unsigned long long seed, double rank_tol);

// Potential, heat and phi oracles plus capacity scaling of the configured domain.
std::vector<Check> greens_checks(const RunConfig& c);

struct PieceSolve {
    Domain domain;
    Grid grid;
    WTable w1;
    PicardResult picard;
    FlowFields flow;
    NSResidual residual;       // every interior node
    NSResidual deep_residual;  // nodes at least margin_for(grid) from the faces
    std::array<double, 4> face_sup{};  // |u1|, |u2|, |u3|, |p| on the spatial faces of the grid box
};

// Picard iteration and reconstruction on one piece with the given forcing on a grid over the
// piece's bounding box. outer_support checks that F vanishes on the piece boundary.
PieceSolve solve_piece(const RunConfig& c, const Domain& piece, const VectorField& F, bool outer_support);

// Runs c.subcommand and writes its reports into c.output.
RunResult run(const RunConfig& c, const RunOptions& opt = {});

}  // namespace nsfp
