#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nsfp/finite_diff.hpp"
#include "nsfp/fixed_point.hpp"
#include "nsfp/forcing.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp {

// u1, u2, u3, p at the nodes of one grid.
struct FlowFields {
    Grid grid;
    std::array<GridData, 4> f;

    const GridData& u(int j) const { return f[j]; }  // j = 0..2
    const GridData& p() const { return f[3]; }
};

// u1 = w7 + w'7, u2 = w11 + w'11, u3 = w15 + w'15, p = w16 + w'16.
FlowFields reconstruct(const WTable& w1, const WTable& w2);

struct NSResidual {
    // Divergence, then the three momentum residuals du_j/dt - mu Lap u_j + u.grad u_j + tau dp/dx_j - F_j.
    std::array<GridData, 4> r;
    std::array<ResidualSummary, 4> summary;  // interior nodes, time included

    double sup() const;
};

// margin: interior depth in nodes used by the summaries.
NSResidual ns_residual(const FlowFields& flow, const std::array<GridData, 3>& F, double mu, double tau,
                       int margin = 1);
NSResidual ns_residual(const FlowFields& flow, const VectorField& F, double mu, double tau, int margin = 1);

// Piecewise flow on boxes with disjoint interiors. Points on a face shared by two pieces are
// undefined.
class AssembledFlow {
public:
    AssembledFlow(std::vector<Box> pieces, std::vector<FlowFields> fields);

    // nullopt on an interface, zeros outside every piece, else the owning piece's interpolant.
    std::optional<std::array<double, 4>> eval(double t, const Vec3& x) const;
    bool on_interface(const Vec3& x) const;
    // Fraction of the grid's spatial cells touching an interface.
    double mask_fraction(const Grid& g) const;

    const std::vector<Box>& pieces() const { return pieces_; }
    const std::vector<FlowFields>& fields() const { return fields_; }

private:
    struct Face {
        int axis;
        double at;
        Box rect;  // extent of the shared face (degenerate along axis)
    };
    std::vector<Box> pieces_;
    std::vector<FlowFields> fields_;
    std::vector<Face> interfaces_;
    double tol_ = 0.0;
};

// Throws PartitionError when two pieces overlap.
AssembledFlow assemble_global(std::vector<Box> pieces, std::vector<FlowFields> fields);

}  // namespace nsfp
