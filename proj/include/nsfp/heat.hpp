#pragma once

#include <vector>

#include "nsfp/field.hpp"
#include "nsfp/geometry.hpp"
#include "nsfp/quadrature.hpp"

namespace nsfp {

// The Duhamel integral H[v](t,x) = int_0^t int_R3 G_mu(x - y, t - s) v(s, y) dy ds satisfies
// dH/dt - mu Lap H = v, so mu Lap H - dH/dt = kHeatSourceSign * v. The lift used by the
// solver is kHeatSourceSign * H, which satisfies mu Lap P - dP/dt = v.
// heat_residual / resolve_heat_sign confirm the value numerically.
inline constexpr double kHeatSourceSign = -1.0;

// Gauss-Legendre in s = sqrt((t - tau) / t) on [0, 1] and tensor Gauss-Hermite in the scaled
// offset theta, y = x + 2 sqrt(mu (t - tau)) theta.
struct HeatQuadrature {
    int legendre_order = 16;
    int hermite_order = 10;
    QuadratureRule legendre;  // on [0, 1]
    QuadratureRule hermite;

    explicit HeatQuadrature(int legendre_order = 16, int hermite_order = 10);
};

struct HeatDeriv {
    int time_order = 0;
    MultiIndex beta{0, 0, 0};
};

// Pointwise H[v] or a derivative of it. Spatial derivatives fall on the kernel (Hermite
// factors); the time derivative uses dH/dt = mu Lap H + v. Supported: spatial order <= 4, or
// one time derivative with spatial order <= 3.
double heat_propagate(const ScalarField& v, double mu, double t, const Vec3& x, const HeatDeriv& d,
                      const HeatQuadrature& q);

// H[v] spatial derivatives at every node of v's grid. v is interpolated with Catmull-Rom in
// space and linearly in time, and is zero outside the grid box.
std::vector<GridData> heat_propagate_grid(const GridData& v, double mu, const std::vector<MultiIndex>& betas,
                                          const HeatQuadrature& q);

// All multi-indices with min_order <= |beta| <= max_order, in graded lexicographic order.
std::vector<MultiIndex> multi_indices(int min_order, int max_order);

}  // namespace nsfp
