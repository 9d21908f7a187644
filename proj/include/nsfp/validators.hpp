#pragma once

#include <vector>

#include "nsfp/field.hpp"
#include "nsfp/finite_diff.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp {

struct FieldResidual {
    GridData residual;
    ResidualSummary summary;  // interior nodes only
};

// Lap v - h1 by central differences, per time level.
FieldResidual poisson_residual(const ScalarField& v, const ScalarField& h1, const Grid& g);
FieldResidual poisson_residual(const GridData& v, const GridData& h1);

// mu Lap h2 - dh2/dt - sign * v.
FieldResidual heat_residual(const ScalarField& h2, const ScalarField& v, double mu, const Grid& g, double sign);
FieldResidual heat_residual(const GridData& h2, const GridData& v, double mu, double sign);

struct HeatSignReport {
    double sign = 0.0;                // the sign whose residual decays
    std::vector<double> plus_sup;     // sup residual with sign +1, per refinement level
    std::vector<double> minus_sup;    // sup residual with sign -1
    double observed_order = 0.0;      // of the winning sign, between the last two levels
};

// h2 and v sampled on each grid of a refinement sequence (spacing halving).
HeatSignReport resolve_heat_sign(const std::vector<GridData>& h2_levels, const std::vector<GridData>& v_levels,
                                 double mu);

}  // namespace nsfp
