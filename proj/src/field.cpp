#include "nsfp/field.hpp"

#include <cmath>

#include "nsfp/errors.hpp"

namespace nsfp {

void Weights1D::add(int i, double wi) {
    for (int c = 0; c < count; ++c)
        if (idx[c] == i) {
            w[c] += wi;
            return;
        }
    idx[count] = i;
    w[count] = wi;
    ++count;
}

namespace {

// Catmull-Rom basis on one cell (nodes c-1..c+2) and its s-derivatives.
void catmull_rom(double s, int d, double out[4]) {
    const double s2 = s * s, s3 = s2 * s;
    switch (d) {
        case 0:
            out[0] = 0.5 * (-s + 2 * s2 - s3);
            out[1] = 0.5 * (2 - 5 * s2 + 3 * s3);
            out[2] = 0.5 * (s + 4 * s2 - 3 * s3);
            out[3] = 0.5 * (-s2 + s3);
            break;
        case 1:
            out[0] = 0.5 * (-1 + 4 * s - 3 * s2);
            out[1] = 0.5 * (-10 * s + 9 * s2);
            out[2] = 0.5 * (1 + 8 * s - 9 * s2);
            out[3] = 0.5 * (-2 * s + 3 * s2);
            break;
        case 2:
            out[0] = 0.5 * (4 - 6 * s);
            out[1] = 0.5 * (-10 + 18 * s);
            out[2] = 0.5 * (8 - 18 * s);
            out[3] = 0.5 * (-2 + 6 * s);
            break;
        case 3:
            out[0] = -3.0;
            out[1] = 9.0;
            out[2] = -9.0;
            out[3] = 3.0;
            break;
        default:
            out[0] = out[1] = out[2] = out[3] = 0.0;
    }
}

}  // namespace

Weights1D interp_weights(double y, double x0, double h, int n, Interp kind, int d) {
    Weights1D out;
    const double u = (y - x0) / h;
    const double tol = 1e-12;
    if (u < -tol || u > (n - 1) + tol) return out;
    if (n == 1) {
        if (d == 0) out.add(0, 1.0);
        return out;
    }
    int c = static_cast<int>(std::floor(u));
    if (c < 0) c = 0;
    if (c > n - 2) c = n - 2;
    const double s = u - c;
    const double scale = std::pow(h, -d);

    if (kind == Interp::Linear || n < 3) {
        if (d == 0) {
            out.add(c, 1.0 - s);
            out.add(c + 1, s);
        } else if (d == 1) {
            out.add(c, -scale);
            out.add(c + 1, scale);
        }
        return out;
    }

    double b[4];
    catmull_rom(s, d, b);
    for (int k = 0; k < 4; ++k) {
        const int node = c - 1 + k;
        const double wk = b[k] * scale;
        if (wk == 0.0) continue;
        if (node < 0) {
            out.add(0, 3 * wk);
            out.add(1, -3 * wk);
            out.add(2, wk);
        } else if (node > n - 1) {
            out.add(n - 1, 3 * wk);
            out.add(n - 2, -3 * wk);
            out.add(n - 3, wk);
        } else {
            out.add(node, wk);
        }
    }
    return out;
}

bool Support::contains(double t, const Vec3& x) const {
    return t >= 0.0 && t <= domain.T && domain.contains(x);
}

ScalarField ScalarField::zero() {
    ScalarField f;
    f.f_ = [](double, const Vec3&) { return 0.0; };
    f.deriv_ = [](double, const Vec3&, const MultiIndex&) { return 0.0; };
    return f;
}

ScalarField ScalarField::analytic(Fn fn, std::optional<Support> support, DerivFn deriv) {
    ScalarField f;
    f.f_ = std::move(fn);
    f.deriv_ = std::move(deriv);
    f.support_ = std::move(support);
    return f;
}

ScalarField ScalarField::sampled(std::shared_ptr<const GridData> data, Interp space) {
    ScalarField f;
    Support s;
    s.domain.boxes = {data->grid.box};
    s.domain.T = data->grid.T;
    f.support_ = s;
    f.samples_ = data;
    f.interp_ = space;
    const GridData* raw = data.get();
    f.f_ = [raw, space](double t, const Vec3& x) { return interpolate(*raw, t, x, space); };
    f.deriv_ = [raw, space](double t, const Vec3& x, const MultiIndex& b) {
        return interpolate(*raw, t, x, space, b);
    };
    return f;
}

ScalarField ScalarField::sampled(GridData data, Interp space) {
    return sampled(std::make_shared<const GridData>(std::move(data)), space);
}

bool ScalarField::in_support(double t, const Vec3& x) const {
    return !support_ || support_->contains(t, x);
}

double ScalarField::operator()(double t, const Vec3& x) const {
    if (!f_) return 0.0;
    if (!in_support(t, x)) return 0.0;
    return f_(t, x);
}

double ScalarField::derivative(double t, const Vec3& x, const MultiIndex& beta) const {
    if (order(beta) == 0) return (*this)(t, x);
    if (!f_) return 0.0;
    if (!deriv_) throw ParameterError("field", "field carries no derivative rule");
    if (!in_support(t, x)) return 0.0;
    return deriv_(t, x, beta);
}

double interpolate(const GridData& d, double t, const Vec3& x, Interp space, const MultiIndex& beta) {
    const Grid& g = d.grid;
    if (t < 0.0 || t > g.T) return 0.0;
    Weights1D wt;
    if (g.n[0] == 1) {
        wt.add(0, 1.0);
    } else {
        wt = interp_weights(t, 0.0, g.dt(), g.n[0], Interp::Linear, 0);
    }
    Weights1D w[3];
    for (int a = 0; a < 3; ++a) {
        w[a] = interp_weights(x[a], g.box.lo[a], g.h(a), g.n[a + 1], space, beta[a]);
        if (w[a].count == 0) return 0.0;
    }
    double acc = 0.0;
    for (int it = 0; it < wt.count; ++it)
        for (int i = 0; i < w[0].count; ++i)
            for (int j = 0; j < w[1].count; ++j) {
                const double wij = wt.w[it] * w[0].w[i] * w[1].w[j];
                for (int k = 0; k < w[2].count; ++k)
                    acc += wij * w[2].w[k] * d.at(wt.idx[it], w[0].idx[i], w[1].idx[j], w[2].idx[k]);
            }
    return acc;
}

GridData sample(const ScalarField& f, const Grid& g) {
    GridData out(g);
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < g.n[1]; ++i)
            for (int j = 0; j < g.n[2]; ++j)
                for (int k = 0; k < g.n[3]; ++k) out.at(m, i, j, k) = f(g.t(m), g.node(i, j, k));
    return out;
}

}  // namespace nsfp
