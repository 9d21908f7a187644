#include "nsfp/validators.hpp"

#include <cmath>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

void require_same_grid(const GridData& a, const GridData& b) {
    if (a.grid.size() != b.grid.size()) throw GridError("greens_operators", "residual operands live on different grids");
}

void require_spatial_stencil(const Grid& g) {
    for (int a = 1; a <= 3; ++a)
        if (g.n[a] < 3) throw GridError("greens_operators", "residual needs at least 3 nodes per spatial axis");
}

}  // namespace

FieldResidual poisson_residual(const GridData& v, const GridData& h1) {
    require_same_grid(v, h1);
    require_spatial_stencil(v.grid);
    FieldResidual r{fd_laplacian(v) - h1, {}};
    r.summary = summarize_interior(r.residual, false);
    return r;
}

FieldResidual poisson_residual(const ScalarField& v, const ScalarField& h1, const Grid& g) {
    return poisson_residual(sample(v, g), sample(h1, g));
}

FieldResidual heat_residual(const GridData& h2, const GridData& v, double mu, double sign) {
    require_same_grid(h2, v);
    require_spatial_stencil(h2.grid);
    if (h2.grid.n[0] < 3) throw GridError("greens_operators", "heat residual needs at least 3 time levels");
    FieldResidual r{mu * fd_laplacian(h2) - fd_derivative(h2, 0, 1) - sign * v, {}};
    r.summary = summarize_interior(r.residual, true);
    return r;
}

FieldResidual heat_residual(const ScalarField& h2, const ScalarField& v, double mu, const Grid& g, double sign) {
    return heat_residual(sample(h2, g), sample(v, g), mu, sign);
}

HeatSignReport resolve_heat_sign(const std::vector<GridData>& h2_levels, const std::vector<GridData>& v_levels,
                                 double mu) {
    if (h2_levels.size() != v_levels.size() || h2_levels.size() < 2)
        throw ParameterError("greens_operators", "sign resolution needs at least two matching refinement levels");
    HeatSignReport rep;
    for (std::size_t l = 0; l < h2_levels.size(); ++l) {
        rep.plus_sup.push_back(heat_residual(h2_levels[l], v_levels[l], mu, 1.0).summary.sup);
        rep.minus_sup.push_back(heat_residual(h2_levels[l], v_levels[l], mu, -1.0).summary.sup);
    }
    const std::size_t L = h2_levels.size() - 1;
    const double op = observed_order(rep.plus_sup[L - 1], rep.plus_sup[L]);
    const double om = observed_order(rep.minus_sup[L - 1], rep.minus_sup[L]);
    // The wrong sign leaves a residual of size 2|v| that does not shrink under refinement.
    if (rep.plus_sup[L] < rep.minus_sup[L]) {
        rep.sign = 1.0;
        rep.observed_order = op;
    } else {
        rep.sign = -1.0;
        rep.observed_order = om;
    }
    return rep;
}

}  // namespace nsfp
