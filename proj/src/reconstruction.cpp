#include "nsfp/reconstruction.hpp"

#include <cmath>

#include "nsfp/errors.hpp"
#include "nsfp/field.hpp"

namespace nsfp {

FlowFields reconstruct(const WTable& w1, const WTable& w2) {
    const int idx[4] = {7, 11, 15, 16};
    FlowFields out;
    out.grid = w1[7].grid;
    for (int c = 0; c < 4; ++c) {
        const GridData& a = w1[idx[c]];
        const GridData& b = w2[idx[c]];
        if (!a.grid.same_as(b.grid) || !a.grid.same_as(out.grid))
            throw GridError("field_reconstruction", "W tables live on different grids");
        out.f[c] = a + b;
    }
    return out;
}

double NSResidual::sup() const {
    double s = 0.0;
    for (const auto& x : summary) s = std::max(s, x.sup);
    return s;
}

NSResidual ns_residual(const FlowFields& flow, const std::array<GridData, 3>& F, double mu, double tau,
                       int margin) {
    const Grid& g = flow.grid;
    for (int a = 0; a < 4; ++a)
        if (g.n[a] < 3) throw GridError("field_reconstruction", "residual needs at least 3 nodes along every axis");
    for (const auto& f : F)
        if (!f.grid.same_as(g)) throw GridError("field_reconstruction", "forcing samples live on a different grid");
    NSResidual res;
    std::array<std::array<GridData, 3>, 3> du;  // du[j][k] = d u_j / d x_k
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) du[j][k] = fd_derivative(flow.u(j), k + 1, 1);
    res.r[0] = du[0][0] + du[1][1];
    res.r[0] += du[2][2];
    for (int j = 0; j < 3; ++j) {
        GridData m = fd_derivative(flow.u(j), 0, 1) - mu * fd_laplacian(flow.u(j));
        for (int k = 0; k < 3; ++k) m += hadamard(flow.u(k), du[j][k]);
        m += tau * fd_derivative(flow.p(), j + 1, 1);
        m -= F[j];
        res.r[1 + j] = std::move(m);
    }
    for (int c = 0; c < 4; ++c) res.summary[c] = summarize_interior(res.r[c], true, margin);
    return res;
}

NSResidual ns_residual(const FlowFields& flow, const VectorField& F, double mu, double tau, int margin) {
    return ns_residual(flow, {sample(F[0], flow.grid), sample(F[1], flow.grid), sample(F[2], flow.grid)}, mu, tau,
                       margin);
}

AssembledFlow::AssembledFlow(std::vector<Box> pieces, std::vector<FlowFields> fields)
    : pieces_(std::move(pieces)), fields_(std::move(fields)) {
    double diam = 0.0;
    for (const auto& b : pieces_) diam = std::max(diam, b.diameter());
    tol_ = 1e-12 * diam;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        for (std::size_t j = i + 1; j < pieces_.size(); ++j) {
            const Box &a = pieces_[i], &b = pieces_[j];
            for (int ax = 0; ax < 3; ++ax) {
                double at;
                if (std::abs(a.hi[ax] - b.lo[ax]) <= tol_) at = a.hi[ax];
                else if (std::abs(b.hi[ax] - a.lo[ax]) <= tol_) at = a.lo[ax];
                else continue;
                Face f{ax, at, {}};
                bool area = true;
                for (int o = 0; o < 3; ++o) {
                    if (o == ax) {
                        f.rect.lo[o] = f.rect.hi[o] = at;
                        continue;
                    }
                    f.rect.lo[o] = std::max(a.lo[o], b.lo[o]);
                    f.rect.hi[o] = std::min(a.hi[o], b.hi[o]);
                    if (f.rect.hi[o] - f.rect.lo[o] <= tol_) area = false;
                }
                if (area) interfaces_.push_back(f);
            }
        }
}

bool AssembledFlow::on_interface(const Vec3& x) const {
    for (const auto& f : interfaces_)
        if (std::abs(x[f.axis] - f.at) <= tol_ && f.rect.contains(x, tol_)) return true;
    return false;
}

std::optional<std::array<double, 4>> AssembledFlow::eval(double t, const Vec3& x) const {
    if (on_interface(x)) return std::nullopt;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!pieces_[i].contains(x, tol_)) continue;
        std::array<double, 4> out;
        for (int c = 0; c < 4; ++c) out[c] = interpolate(fields_[i].f[c], t, x, Interp::Linear);
        return out;
    }
    return std::array<double, 4>{0, 0, 0, 0};
}

double AssembledFlow::mask_fraction(const Grid& g) const {
    std::size_t masked = 0;
    for (int i = 0; i + 1 < g.n[1]; ++i)
        for (int j = 0; j + 1 < g.n[2]; ++j)
            for (int k = 0; k + 1 < g.n[3]; ++k) {
                Box cell{g.node(i, j, k), g.node(i + 1, j + 1, k + 1)};
                bool hit = false;
                for (const auto& f : interfaces_) {
                    if (f.at < cell.lo[f.axis] - tol_ || f.at > cell.hi[f.axis] + tol_) continue;
                    bool overlap = true;
                    for (int o = 0; o < 3 && overlap; ++o)
                        if (o != f.axis && (f.rect.hi[o] <= cell.lo[o] || f.rect.lo[o] >= cell.hi[o])) overlap = false;
                    if (overlap) {
                        hit = true;
                        break;
                    }
                }
                if (hit) ++masked;
            }
    return static_cast<double>(masked) / static_cast<double>(g.cell_count());
}

AssembledFlow assemble_global(std::vector<Box> pieces, std::vector<FlowFields> fields) {
    if (pieces.size() != fields.size()) throw ParameterError("field_reconstruction", "one flow per piece is required");
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            if (interiors_overlap(pieces[i], pieces[j]))
                throw PartitionError("field_reconstruction", "partition pieces overlap");
    return AssembledFlow(std::move(pieces), std::move(fields));
}

}  // namespace nsfp
