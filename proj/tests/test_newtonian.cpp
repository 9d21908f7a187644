#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "nsfp/bounds.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/newtonian.hpp"
#include "nsfp/validators.hpp"

using namespace nsfp;
using nsfp::testing::poly_bump;
using nsfp::testing::single_box;

namespace {

const Box kCube{{-1, -1, -1}, {1, 1, 1}};

Grid cube_grid(int n, int nt = 1) {
    Grid g;
    g.box = kCube;
    g.T = 1.0;
    g.n = {nt, n, n, n};
    return g;
}

ScalarField bump_field(double amp = 1.0) {
    return ScalarField::analytic(
        [amp](double t, const Vec3& x) { return amp * (1.0 + t) * poly_bump(x, {0.1, -0.05, 0.0}, 0.8); },
        Support{single_box(kCube)});
}

}  // namespace

TEST_CASE("constant density on a box reproduces the exact box potential") {
    const Box b{{0, 0, 0}, {1, 0.8, 0.6}};
    const Domain K = single_box(b);
    const ScalarField h = ScalarField::analytic([](double, const Vec3&) { return 2.0; }, Support{K});
    const std::vector<Vec3> pts{{0.4, 0.37, 0.29}, {1.6, 0.2, -0.5}, {0.5, 0.4, 0.3}};
    const auto v = newtonian_potential(h, 0.5, K, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double exact = -2.0 * box_inverse_distance_integral(b, pts[i]) / (4 * M_PI);
        CHECK(v[i] == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("gradient of the potential matches differences of the potential") {
    const Domain K = single_box(kCube);
    const ScalarField h = bump_field();
    const Vec3 p{1.4, 0.3, -0.2};
    const double d = 1e-3;
    for (int a = 0; a < 3; ++a) {
        MultiIndex e{0, 0, 0};
        e[a] = 1;
        Vec3 pp = p, pm = p;
        pp[a] += d;
        pm[a] -= d;
        const auto g = newtonian_potential(h, 0.3, K, {p}, e, 32);
        const auto vp = newtonian_potential(h, 0.3, K, {pp}, {0, 0, 0}, 32);
        const auto vm = newtonian_potential(h, 0.3, K, {pm}, {0, 0, 0}, 32);
        CHECK(g[0] == doctest::Approx((vp[0] - vm[0]) / (2 * d)).epsilon(1e-5));
    }
    CHECK_THROWS_AS(newtonian_potential(h, 0.3, K, {p}, {2, 0, 0}), ParameterError);
}

TEST_CASE("zero density gives a zero potential") {
    const Grid g = cube_grid(9, 2);
    const CellField c = cell_average(GridData(g));
    const auto out = newtonian_potential_grid({&c}, {{0, 0, 0}, {1, 0, 0}});
    CHECK(out[0][0].sup_norm() == 0.0);
    CHECK(out[1][0].sup_norm() == 0.0);
}

TEST_CASE("grid potential agrees with the pointwise potential at nodes") {
    const Grid g = cube_grid(17, 2);
    const ScalarField h = bump_field();
    const CellField c = cell_sample(h, g);
    const auto out = newtonian_potential_grid({&c}, {{0, 0, 0}, {0, 1, 0}});
    const Domain K = single_box(kCube);
    for (const auto& ijk : {std::array<int, 3>{8, 8, 8}, std::array<int, 3>{3, 12, 5}, std::array<int, 3>{0, 16, 9}}) {
        const Vec3 x = g.node(ijk[0], ijk[1], ijk[2]);
        const double pv = newtonian_potential(h, g.t(1), K, {x}, {0, 0, 0}, 128)[0];
        CHECK(out[0][0].at(1, ijk[0], ijk[1], ijk[2]) == doctest::Approx(pv).epsilon(5e-3));
        const double pg = newtonian_potential(h, g.t(1), K, {x}, {0, 1, 0}, 128)[0];
        CHECK(out[1][0].at(1, ijk[0], ijk[1], ijk[2]) == doctest::Approx(pg).epsilon(2e-2).scale(1e-2));
    }
}

TEST_CASE("Laplacian of the grid potential converges to the density") {
    const ScalarField h = bump_field();
    double sup[2];
    int level = 0;
    for (int n : {13, 25}) {
        const Grid g = cube_grid(n);
        const CellField c = cell_sample(h, g);
        const auto v = newtonian_potential_grid({&c}, {{0, 0, 0}})[0][0];
        sup[level++] = poisson_residual(v, sample(h, g)).summary.sup;
    }
    MESSAGE("Poisson residual sups: " << sup[0] << " " << sup[1]);
    CHECK(sup[1] < 0.1);
    CHECK(observed_order(sup[0], sup[1]) > 1.5);
}

TEST_CASE("potential is harmonic away from the density") {
    const Domain K = single_box({{-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3}});
    const ScalarField h = ScalarField::analytic([](double, const Vec3& x) { return poly_bump(x, {0, 0, 0}, 0.3); }, Support{K});
    const Vec3 p{1.0, 0.4, -0.2};
    const double d = 0.05;
    std::vector<Vec3> pts{p};
    for (int a = 0; a < 3; ++a)
        for (double s : {d, -d}) {
            Vec3 q = p;
            q[a] += s;
            pts.push_back(q);
        }
    const auto v = newtonian_potential(h, 0.0, K, pts, {0, 0, 0}, 24);
    double lap = -6 * v[0];
    for (int i = 1; i < 7; ++i) lap += v[i];
    lap /= d * d;
    CHECK(std::abs(lap) < 0.05 * std::abs(v[0]));
}
