#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include "nsfp/geometry.hpp"

namespace nsfp {

enum class Interp { Linear, Cubic };

// Nonzero 1D interpolation weights at a point for a uniform node row.
struct Weights1D {
    int count = 0;
    std::array<int, 6> idx{};
    std::array<double, 6> w{};

    void add(int i, double wi);
};

// Weights of the d-th derivative of the interpolant through nodes x0 + i*h, i in [0, n).
// Cubic uses the Catmull-Rom kernel with quadratically extrapolated ghost nodes, so it
// reproduces quadratics up to the row ends. Points outside [x0, x0+(n-1)h] get no weights.
Weights1D interp_weights(double y, double x0, double h, int n, Interp kind, int d);

// Space-time support [0,T] x K1 outside of which a field is exactly zero.
struct Support {
    Domain domain;
    bool contains(double t, const Vec3& x) const;
};

// Scalar function of (t, x1, x2, x3). Evaluations outside the support return exactly 0.
class ScalarField {
public:
    using Fn = std::function<double(double, const Vec3&)>;
    using DerivFn = std::function<double(double, const Vec3&, const MultiIndex&)>;

    ScalarField() = default;

    static ScalarField zero();
    // An unset support means the closure is evaluated everywhere (test mode).
    static ScalarField analytic(Fn f, std::optional<Support> support, DerivFn deriv = nullptr);
    // Interpolated grid samples: `space` in x, linear in t; support is the grid box over [0,T].
    static ScalarField sampled(std::shared_ptr<const GridData> data, Interp space = Interp::Linear);
    static ScalarField sampled(GridData data, Interp space = Interp::Linear);

    double operator()(double t, const Vec3& x) const;
    // Spatial derivative; throws when the field carries no derivative rule.
    double derivative(double t, const Vec3& x, const MultiIndex& beta) const;
    bool has_derivatives() const { return static_cast<bool>(deriv_); }
    bool in_support(double t, const Vec3& x) const;
    const std::optional<Support>& support() const { return support_; }
    const GridData* samples() const { return samples_.get(); }
    Interp interpolation() const { return interp_; }

private:
    Fn f_;
    DerivFn deriv_;
    std::optional<Support> support_;
    std::shared_ptr<const GridData> samples_;
    Interp interp_ = Interp::Linear;
};

// Interpolated value (or spatial derivative) of grid samples at (t, x); zero outside the grid.
double interpolate(const GridData& d, double t, const Vec3& x, Interp space,
                   const MultiIndex& beta = {0, 0, 0});

// Samples a field at every node of a grid.
GridData sample(const ScalarField& f, const Grid& g);

}  // namespace nsfp
