#include "nsfp/newtonian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

constexpr double kInvFourPi = 0.25 / M_PI;

struct Cell {
    Vec3 c;
    Vec3 half;
    double volume;
};

std::vector<Cell> make_cells(const Domain& K, int cells_per_axis) {
    const Box bb = K.bounding_box();
    const double edge = std::max({bb.extent(0), bb.extent(1), bb.extent(2)}) / cells_per_axis;
    std::vector<Cell> cells;
    for (const auto& b : K.boxes) {
        int cnt[3];
        double d[3];
        for (int a = 0; a < 3; ++a) {
            cnt[a] = std::max(1, static_cast<int>(std::ceil(b.extent(a) / edge - 1e-9)));
            d[a] = b.extent(a) / cnt[a];
        }
        for (int i = 0; i < cnt[0]; ++i)
            for (int j = 0; j < cnt[1]; ++j)
                for (int k = 0; k < cnt[2]; ++k)
                    cells.push_back({{b.lo[0] + (i + 0.5) * d[0], b.lo[1] + (j + 0.5) * d[1], b.lo[2] + (k + 0.5) * d[2]},
                                     {0.5 * d[0], 0.5 * d[1], 0.5 * d[2]},
                                     d[0] * d[1] * d[2]});
    }
    return cells;
}

int gradient_axis(const MultiIndex& deriv, const char* module) {
    if (deriv[0] < 0 || deriv[1] < 0 || deriv[2] < 0 || order(deriv) > 1)
        throw ParameterError(module, "potential derivatives are limited to order 1");
    for (int a = 0; a < 3; ++a)
        if (deriv[a] == 1) return a;
    return -1;
}

}  // namespace

std::vector<double> newtonian_potential(const ScalarField& h, double t, const Domain& K,
                                        const std::vector<Vec3>& points, const MultiIndex& deriv,
                                        int cells_per_axis) {
    K.validate("greens_operators");
    if (cells_per_axis < 1) throw ParameterError("greens_operators", "cells_per_axis must be at least 1");
    const int axis = gradient_axis(deriv, "greens_operators");
    const std::vector<Cell> cells = make_cells(K, cells_per_axis);
    std::vector<double> dens(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) dens[c] = h(t, cells[c].c) * cells[c].volume;

    std::vector<double> out(points.size(), 0.0);
    for (std::size_t p = 0; p < points.size(); ++p) {
        const Vec3& x = points[p];
        double acc = 0.0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (dens[c] == 0.0) continue;
            const Cell& cell = cells[c];
            const double dx = cell.c[0] - x[0], dy = cell.c[1] - x[1], dz = cell.c[2] - x[2];
            const bool inside = std::abs(dx) < cell.half[0] * (1 - 1e-12) && std::abs(dy) < cell.half[1] * (1 - 1e-12) &&
                                std::abs(dz) < cell.half[2] * (1 - 1e-12);
            if (inside) {
                if (axis < 0) {
                    const double rc = std::cbrt(3.0 * cell.volume / (4.0 * M_PI));
                    acc -= (dens[c] / cell.volume) * 0.5 * rc * rc;
                }
                continue;
            }
            const double r2 = dx * dx + dy * dy + dz * dz;
            const double r = std::sqrt(r2);
            if (axis < 0) {
                acc -= kInvFourPi * dens[c] / r;
            } else {
                const double d[3] = {dx, dy, dz};
                acc -= kInvFourPi * dens[c] * d[axis] / (r2 * r);
            }
        }
        out[p] = acc;
    }
    return out;
}

CellField cell_average(const GridData& nodal) {
    const Grid& g = nodal.grid;
    CellField out(g);
    const int cx = g.n[1] - 1, cy = g.n[2] - 1, cz = g.n[3] - 1;
    for (int m = 0; m < g.n[0]; ++m) {
        double* dst = out.slice(m);
        for (int i = 0; i < cx; ++i)
            for (int j = 0; j < cy; ++j)
                for (int k = 0; k < cz; ++k) {
                    double s = 0.0;
                    for (int c = 0; c < 8; ++c) s += nodal.at(m, i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                    dst[(std::size_t(i) * cy + j) * cz + k] = 0.125 * s;
                }
    }
    return out;
}

CellField cell_sample(const ScalarField& f, const Grid& g) {
    CellField out(g);
    const int cx = g.n[1] - 1, cy = g.n[2] - 1, cz = g.n[3] - 1;
    for (int m = 0; m < g.n[0]; ++m) {
        double* dst = out.slice(m);
        const double t = g.t(m);
        for (int i = 0; i < cx; ++i)
            for (int j = 0; j < cy; ++j)
                for (int k = 0; k < cz; ++k) {
                    const Vec3 c{g.x(0, i) + 0.5 * g.h(0), g.x(1, j) + 0.5 * g.h(1), g.x(2, k) + 0.5 * g.h(2)};
                    dst[(std::size_t(i) * cy + j) * cz + k] = f(t, c);
                }
    }
    return out;
}

std::vector<std::vector<GridData>> newtonian_potential_grid(const std::vector<const CellField*>& densities,
                                                            const std::vector<MultiIndex>& derivs) {
    if (densities.empty()) return std::vector<std::vector<GridData>>(derivs.size());
    const Grid& g = densities.front()->grid;
    for (const CellField* d : densities)
        if (!d->grid.same_as(g)) throw GridError("greens_operators", "densities live on different grids");
    for (int a = 1; a < 4; ++a)
        if (g.n[a] < 2) throw GridError("greens_operators", "potential grid needs at least 2 nodes per axis");

    const int nt = g.n[0];
    const int nf = static_cast<int>(densities.size());
    const Eigen::Index ncell = static_cast<Eigen::Index>(g.cell_count());
    const Eigen::Index nnode = static_cast<Eigen::Index>(g.spatial_size());
    const double vol = g.h(0) * g.h(1) * g.h(2);

    // Columns ordered (field, time level).
    Eigen::MatrixXd D(ncell, Eigen::Index(nf) * nt);
    for (int f = 0; f < nf; ++f)
        for (int m = 0; m < nt; ++m)
            D.col(Eigen::Index(f) * nt + m) = Eigen::Map<const Eigen::VectorXd>(densities[f]->slice(m), ncell) * vol;

    std::vector<Vec3> centres(ncell);
    {
        const int cx = g.n[1] - 1, cy = g.n[2] - 1, cz = g.n[3] - 1;
        for (int i = 0; i < cx; ++i)
            for (int j = 0; j < cy; ++j)
                for (int k = 0; k < cz; ++k)
                    centres[(std::size_t(i) * cy + j) * cz + k] = {g.x(0, i) + 0.5 * g.h(0), g.x(1, j) + 0.5 * g.h(1),
                                                                  g.x(2, k) + 0.5 * g.h(2)};
    }
    std::vector<Vec3> nodes(nnode);
    for (int i = 0; i < g.n[1]; ++i)
        for (int j = 0; j < g.n[2]; ++j)
            for (int k = 0; k < g.n[3]; ++k) nodes[(std::size_t(i) * g.n[2] + j) * g.n[3] + k] = g.node(i, j, k);

    std::vector<std::vector<GridData>> out(derivs.size(), std::vector<GridData>(nf, GridData(g)));
    constexpr Eigen::Index kBlock = 256;
    Eigen::MatrixXd Kb(kBlock, ncell);
    for (std::size_t di = 0; di < derivs.size(); ++di) {
        const int axis = gradient_axis(derivs[di], "greens_operators");
        for (Eigen::Index r0 = 0; r0 < nnode; r0 += kBlock) {
            const Eigen::Index rows = std::min(kBlock, nnode - r0);
            for (Eigen::Index c = 0; c < ncell; ++c) {
                const Vec3& y = centres[c];
                for (Eigen::Index r = 0; r < rows; ++r) {
                    const Vec3& x = nodes[r0 + r];
                    const double d[3] = {y[0] - x[0], y[1] - x[1], y[2] - x[2]};
                    const double r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                    const double inv = 1.0 / std::sqrt(r2);
                    Kb(r, c) = axis < 0 ? -kInvFourPi * inv : -kInvFourPi * d[axis] * inv * inv * inv;
                }
            }
            const Eigen::MatrixXd R = Kb.topRows(rows) * D;
            for (int f = 0; f < nf; ++f)
                for (int m = 0; m < nt; ++m) {
                    double* dst = out[di][f].slice(m) + r0;
                    const auto col = R.col(Eigen::Index(f) * nt + m);
                    for (Eigen::Index r = 0; r < rows; ++r) dst[r] = col(r);
                }
        }
    }
    return out;
}

}  // namespace nsfp
