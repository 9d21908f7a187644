#include <cmath>

#include "doctest.h"
#include "nsfp/field.hpp"

using namespace nsfp;

namespace {

Grid small_grid() {
    Grid g;
    g.box = {{-1, -1, -1}, {1, 1, 1}};
    g.T = 1.0;
    g.n = {5, 9, 9, 9};
    return g;
}

double quad(double t, const Vec3& x) { return 1.0 + 2 * t + x[0] * x[0] - 0.5 * x[1] * x[2] + 0.3 * x[2]; }

}  // namespace

TEST_CASE("cubic interpolation reproduces quadratics up to the grid faces") {
    const Grid g = small_grid();
    const GridData d = sample(ScalarField::analytic(quad, std::nullopt), g);
    for (const Vec3 x : {Vec3{0.13, -0.71, 0.55}, Vec3{-0.99, 0.98, -0.2}, Vec3{0.9, 0.05, 0.95}})
        for (double t : {0.0, 0.37, 1.0}) {
            CHECK(interpolate(d, t, x, Interp::Cubic) == doctest::Approx(quad(t, x)).epsilon(1e-12));
            CHECK(interpolate(d, t, x, Interp::Cubic, {1, 0, 0}) == doctest::Approx(2 * x[0]).epsilon(1e-11));
            CHECK(interpolate(d, t, x, Interp::Cubic, {0, 1, 1}) == doctest::Approx(-0.5).epsilon(1e-10));
        }
}

TEST_CASE("linear interpolation is exact on affine functions") {
    const Grid g = small_grid();
    auto f = [](double t, const Vec3& x) { return 2 - t + 3 * x[0] - x[1] + 0.5 * x[2]; };
    const GridData d = sample(ScalarField::analytic(f, std::nullopt), g);
    const Vec3 x{0.31, -0.47, 0.88};
    CHECK(interpolate(d, 0.61, x, Interp::Linear) == doctest::Approx(f(0.61, x)).epsilon(1e-13));
}

TEST_CASE("interpolation weights sum to one and vanish outside the row") {
    for (Interp kind : {Interp::Linear, Interp::Cubic})
        for (double y : {0.0, 0.123, 0.5, 0.999, 1.0}) {
            const Weights1D w = interp_weights(y, 0.0, 0.1, 11, kind, 0);
            double s = 0.0;
            for (int c = 0; c < w.count; ++c) s += w.w[c];
            CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        }
    CHECK(interp_weights(1.2, 0.0, 0.1, 11, Interp::Cubic, 0).count == 0);
    CHECK(interp_weights(-0.01, 0.0, 0.1, 11, Interp::Linear, 0).count == 0);
}

TEST_CASE("fields are zero outside their support") {
    Support s{Domain{{Box{{0, 0, 0}, {1, 1, 1}}}, 2.0}};
    const ScalarField f = ScalarField::analytic([](double, const Vec3&) { return 5.0; }, s);
    CHECK(f(1.0, {0.5, 0.5, 0.5}) == 5.0);
    CHECK(f(1.0, {1.5, 0.5, 0.5}) == 0.0);
    CHECK(f(2.5, {0.5, 0.5, 0.5}) == 0.0);
    CHECK(f(-0.1, {0.5, 0.5, 0.5}) == 0.0);
    CHECK(ScalarField::zero()(0.3, {0, 0, 0}) == 0.0);
}

TEST_CASE("sampled fields interpolate their grid data") {
    const Grid g = small_grid();
    const ScalarField f = ScalarField::sampled(sample(ScalarField::analytic(quad, std::nullopt), g), Interp::Cubic);
    const Vec3 x{0.2, 0.3, -0.4};
    CHECK(f(0.5, x) == doctest::Approx(quad(0.5, x)).epsilon(1e-12));
    CHECK(f(0.5, {1.2, 0, 0}) == 0.0);
}
