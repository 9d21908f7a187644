#include "nsfp/finite_diff.hpp"

#include <algorithm>
#include <cmath>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

double spacing(const Grid& g, int axis) { return axis == 0 ? g.dt() : g.h(axis - 1); }

}  // namespace

GridData fd_derivative(const GridData& f, int axis, int deriv_order) {
    const Grid& g = f.grid;
    if (axis < 0 || axis > 3) throw ParameterError("finite_diff", "axis out of range");
    if (deriv_order != 1 && deriv_order != 2)
        throw ParameterError("finite_diff", "only first and second derivatives are supported");
    const int n = g.n[axis];
    if (n < 3 || (deriv_order == 2 && n < 4))
        throw GridError("finite_diff", "grid too coarse along a differentiated axis");
    const double h = spacing(g, axis);
    GridData out(g);
    std::array<int, 4> stride_dims = g.n;
    std::size_t stride = 1;
    for (int a = 3; a > axis; --a) stride *= stride_dims[a];

    for (std::size_t base = 0; base < g.size(); ++base) {
        const int pos = static_cast<int>((base / stride) % n);
        const double* p = f.v.data() + base;
        auto at = [&](int off) { return p[static_cast<std::ptrdiff_t>(off) * static_cast<std::ptrdiff_t>(stride)]; };
        double d;
        if (deriv_order == 1) {
            if (pos == 0)
                d = (-3 * at(0) + 4 * at(1) - at(2)) / (2 * h);
            else if (pos == n - 1)
                d = (3 * at(0) - 4 * at(-1) + at(-2)) / (2 * h);
            else
                d = (at(1) - at(-1)) / (2 * h);
        } else {
            if (pos == 0)
                d = (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / (h * h);
            else if (pos == n - 1)
                d = (2 * at(0) - 5 * at(-1) + 4 * at(-2) - at(-3)) / (h * h);
            else
                d = (at(1) - 2 * at(0) + at(-1)) / (h * h);
        }
        out.v[base] = d;
    }
    return out;
}

GridData fd_laplacian(const GridData& f) {
    GridData out = fd_derivative(f, 1, 2);
    out += fd_derivative(f, 2, 2);
    out += fd_derivative(f, 3, 2);
    return out;
}

bool is_interior(const Grid& g, int m, int i, int j, int k, bool time_interior, int margin) {
    auto inside = [margin](int idx, int n) { return idx >= margin && idx <= n - 1 - margin; };
    if (time_interior && !inside(m, g.n[0])) return false;
    return inside(i, g.n[1]) && inside(j, g.n[2]) && inside(k, g.n[3]);
}

ResidualSummary summarize_interior(const GridData& r, bool time_interior, int margin) {
    const Grid& g = r.grid;
    ResidualSummary s;
    double sum = 0.0;
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < g.n[1]; ++i)
            for (int j = 0; j < g.n[2]; ++j)
                for (int k = 0; k < g.n[3]; ++k) {
                    if (!is_interior(g, m, i, j, k, time_interior, margin)) continue;
                    const double a = std::abs(r.at(m, i, j, k));
                    s.sup = std::isfinite(a) ? std::max(s.sup, a) : a;
                    sum += a;
                    ++s.count;
                }
    s.mean_abs = s.count ? sum / s.count : 0.0;
    return s;
}

double observed_order(double coarse_error, double fine_error, double ratio) {
    return std::log(coarse_error / fine_error) / std::log(ratio);
}

}  // namespace nsfp
