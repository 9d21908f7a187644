#pragma once

#include <string>
#include <vector>

#include "nsfp/bounds.hpp"
#include "nsfp/fixed_point.hpp"

namespace nsfp {

struct PartitionSettings {
    double mu = 1.0;
    double epsilon_trunc = 0.0;  // <= 0 selects 1e-2 T
    int capacity_samples = 9;
    int max_depth = 4;
};

struct PartitionPiece {
    Box box;
    int depth = 0;
    BoundConstants constants;
    SmallnessReport smallness;
};

struct PartitionResult {
    bool success = false;
    int depth = 0;                         // deepest level reached
    std::vector<PartitionPiece> pieces;    // passing pieces
    std::vector<PartitionPiece> failures;  // pieces still failing at max_depth
    PartitionPiece worst;                  // smallest contraction margin among failures

    Domain domain(double T) const;
    std::string report() const;
};

// Octant bisection of each box of K until every piece passes smallness_check.
PartitionResult partition_domain(const Domain& K, const HolderBudget& budget, const PartitionSettings& s);

}  // namespace nsfp
