#pragma once

#include <vector>

#include "nsfp/field.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp {

// Value (deriv = 0) or one gradient component of -1/(4 pi) * int_K h(t, y) / |x - y| dy.
// Midpoint rule on near-cubic cells of edge max_extent(K) / cells_per_axis; the cell that
// strictly contains x is replaced by the equal-volume sphere, which contributes
// -h(center) R_c^2 / 2 to the value and nothing to the gradient.
std::vector<double> newtonian_potential(const ScalarField& h, double t, const Domain& K,
                                        const std::vector<Vec3>& points, const MultiIndex& deriv = {0, 0, 0},
                                        int cells_per_axis = 64);

// Densities on the cells of a grid: one block of grid.cell_count() values per time level.
struct CellField {
    Grid grid;
    std::vector<double> v;

    explicit CellField(const Grid& g) : grid(g), v(std::size_t(g.n[0]) * g.cell_count(), 0.0) {}
    double* slice(int m) { return v.data() + std::size_t(m) * grid.cell_count(); }
    const double* slice(int m) const { return v.data() + std::size_t(m) * grid.cell_count(); }
};

// Average of the eight corner samples, i.e. trilinear interpolation at the cell centre.
CellField cell_average(const GridData& nodal);
// Field values at the cell centres.
CellField cell_sample(const ScalarField& f, const Grid& g);

// Potential and/or gradient components at every node, with the grid cells as quadrature cells.
// Nodes sit on cell corners, so no cell is singular. Result is indexed [deriv][field].
std::vector<std::vector<GridData>> newtonian_potential_grid(const std::vector<const CellField*>& densities,
                                                            const std::vector<MultiIndex>& derivs);

}  // namespace nsfp
