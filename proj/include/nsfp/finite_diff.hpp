#pragma once

#include "nsfp/geometry.hpp"

namespace nsfp {

// Axis 0 is time, axes 1..3 are x1..x3.
// Central second-order stencils in the interior, one-sided second-order at the faces.
GridData fd_derivative(const GridData& f, int axis, int deriv_order);

// Central second-order Laplacian in x1..x3.
GridData fd_laplacian(const GridData& f);

// Residual summary over the nodes that are interior in every axis (time too when asked).
struct ResidualSummary {
    double sup = 0.0;
    double mean_abs = 0.0;
    std::size_t count = 0;
};

bool is_interior(const Grid& g, int m, int i, int j, int k, bool time_interior, int margin = 1);
ResidualSummary summarize_interior(const GridData& r, bool time_interior, int margin = 1);

// Observed convergence order from errors at successive halvings of the spacing.
double observed_order(double coarse_error, double fine_error, double ratio = 2.0);

}  // namespace nsfp
