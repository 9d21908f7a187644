#include "nsfp/forcing.hpp"

#include <cmath>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

double smooth_step(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

// 1 on [0, 1/2], 0 on [1, inf), C-infinity in between.
double cutoff(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double a = smooth_step(1.0 - s), b = smooth_step(s - 0.5);
    return a / (a + b);
}

Vec3 normalized(Vec3 d) {
    const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(n > 0)) throw ParameterError("fixed_point_engine", "forcing direction must be nonzero");
    for (auto& c : d) c /= n;
    return d;
}

VectorField from_vector_fn(std::function<Vec3(const Vec3&)> f, const Domain& K) {
    VectorField F;
    for (int a = 0; a < 3; ++a)
        F[a] = ScalarField::analytic([f, a](double, const Vec3& x) { return f(x)[a]; }, Support{K});
    return F;
}

}  // namespace

VectorField make_forcing(const ForcingSpec& spec, const Domain& K) {
    K.validate("fixed_point_engine");
    if (spec.preset == "zero") return {ScalarField::zero(), ScalarField::zero(), ScalarField::zero()};
    if (!(spec.radius > 0)) throw ParameterError("fixed_point_engine", "forcing radius must be positive");
    if (!std::isfinite(spec.amplitude)) throw ParameterError("fixed_point_engine", "forcing amplitude must be finite");
    std::vector<Vec3> probes{spec.center};
    for (int a = 0; a < 3; ++a)
        for (double s : {-1.0, 1.0}) {
            Vec3 p = spec.center;
            p[a] += s * spec.radius;
            probes.push_back(p);
        }
    for (const auto& p : probes)
        if (!K.contains(p)) throw SupportError("fixed_point_engine", "forcing bump is not supported inside the domain");

    const Vec3 c = spec.center, d = normalized(spec.direction);
    const double A = spec.amplitude, r = spec.radius;
    if (spec.preset == "gaussian-bump") {
        const double w = r / 3.0;
        return from_vector_fn(
            [=](const Vec3& x) {
                double s2 = 0.0;
                for (int a = 0; a < 3; ++a) s2 += (x[a] - c[a]) * (x[a] - c[a]);
                const double b = A * std::exp(-s2 / (2 * w * w)) * cutoff(std::sqrt(s2) / r);
                return Vec3{b * d[0], b * d[1], b * d[2]};
            },
            K);
    }
    if (spec.preset == "polynomial-bump") {
        return from_vector_fn(
            [=](const Vec3& x) {
                double s2 = 0.0;
                for (int a = 0; a < 3; ++a) s2 += (x[a] - c[a]) * (x[a] - c[a]);
                s2 /= r * r;
                const double b = s2 < 1 ? A * std::pow(1 - s2, 4) : 0.0;
                return Vec3{b * d[0], b * d[1], b * d[2]};
            },
            K);
    }
    if (spec.preset == "swirl-bump") {
        return from_vector_fn(
            [=](const Vec3& x) {
                double s2 = 0.0;
                for (int a = 0; a < 3; ++a) s2 += (x[a] - c[a]) * (x[a] - c[a]);
                s2 /= r * r;
                if (s2 >= 1) return Vec3{0, 0, 0};
                const double f = -10.0 * A * std::pow(1 - s2, 4) / (r * r);
                const Vec3 g{f * (x[0] - c[0]), f * (x[1] - c[1]), f * (x[2] - c[2])};
                return Vec3{g[1] * d[2] - g[2] * d[1], g[2] * d[0] - g[0] * d[2], g[0] * d[1] - g[1] * d[0]};
            },
            K);
    }
    throw ParameterError("fixed_point_engine", "unknown forcing preset '" + spec.preset + "'");
}

VectorField sum(const VectorField& a, const VectorField& b) {
    VectorField out;
    for (int i = 0; i < 3; ++i) {
        std::optional<Support> s;
        if (a[i].support() && b[i].support()) {
            Domain d = a[i].support()->domain;
            for (const auto& bx : b[i].support()->domain.boxes) d.boxes.push_back(bx);
            d.T = std::max(d.T, b[i].support()->domain.T);
            s = Support{d};
        }
        const ScalarField fa = a[i], fb = b[i];
        out[i] = ScalarField::analytic([fa, fb](double t, const Vec3& x) { return fa(t, x) + fb(t, x); }, s);
    }
    return out;
}

VectorField restrict_to(const VectorField& F, const Domain& piece) {
    VectorField out;
    for (int i = 0; i < 3; ++i) {
        const ScalarField f = F[i];
        out[i] = ScalarField::analytic([f](double t, const Vec3& x) { return f(t, x); }, Support{piece});
    }
    return out;
}

void check_support(const VectorField& F, const Domain& K, const Grid& g, double rel_tol) {
    double peak = 0.0, boundary = 0.0;
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < g.n[1]; ++i)
            for (int j = 0; j < g.n[2]; ++j)
                for (int k = 0; k < g.n[3]; ++k) {
                    const Vec3 x = g.node(i, j, k);
                    bool on_boundary = false;
                    for (int a = 0; a < 3 && !on_boundary; ++a)
                        for (double s : {-0.5, 0.5}) {
                            Vec3 y = x;
                            y[a] += s * g.h(a);
                            if (!K.contains(y)) on_boundary = true;
                        }
                    for (const auto& f : F) {
                        const double v = std::abs(f(g.t(m), x));
                        peak = std::max(peak, v);
                        if (on_boundary) boundary = std::max(boundary, v);
                    }
                }
    if (boundary > rel_tol * peak && boundary > 0.0)
        throw SupportError("fixed_point_engine", "forcing does not vanish on the domain boundary");
}

}  // namespace nsfp
