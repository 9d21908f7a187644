#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/heat.hpp"
#include "nsfp/validators.hpp"

using namespace nsfp;
using nsfp::testing::poly_bump;
using nsfp::testing::single_box;

namespace {

const Box kWide{{-6, -6, -6}, {6, 6, 6}};

ScalarField wide(ScalarField::Fn f, double T = 1.0) { return ScalarField::analytic(std::move(f), Support{single_box(kWide, T)}); }

}  // namespace

TEST_CASE("constant density propagates to c t") {
    const HeatQuadrature q;
    const ScalarField v = wide([](double, const Vec3&) { return 1.7; });
    for (double t : {0.0, 0.25, 1.0})
        CHECK(std::abs(heat_propagate(v, 0.1, t, {0.3, -0.2, 0.5}, {}, q) - 1.7 * t) < 1e-10);
}

TEST_CASE("polynomial densities propagate exactly") {
    const HeatQuadrature q;
    const double mu = 0.2;
    // v = x1^2 + s x2 gives H = t x1^2 + mu t^2 + t^2 x2 / 2.
    const ScalarField v = wide([](double s, const Vec3& x) { return x[0] * x[0] + s * x[1]; });
    const Vec3 x{0.4, -0.7, 0.1};
    const double t = 0.8;
    CHECK(heat_propagate(v, mu, t, x, {}, q) == doctest::Approx(t * x[0] * x[0] + mu * t * t + 0.5 * t * t * x[1]).epsilon(1e-12));
    CHECK(heat_propagate(v, mu, t, x, {0, {1, 0, 0}}, q) == doctest::Approx(2 * t * x[0]).epsilon(1e-12));
    CHECK(heat_propagate(v, mu, t, x, {0, {2, 0, 0}}, q) == doctest::Approx(2 * t).epsilon(1e-12));
    CHECK(heat_propagate(v, mu, t, x, {0, {0, 1, 0}}, q) == doctest::Approx(0.5 * t * t).epsilon(1e-12));
    CHECK(std::abs(heat_propagate(v, mu, t, x, {0, {0, 0, 3}}, q)) < 1e-10);
}

TEST_CASE("time derivative follows from the heat identity") {
    const HeatQuadrature q;
    const double mu = 0.2;
    auto f = [](double s, const Vec3& x) { return x[0] * x[0] + s * x[1]; };
    auto df = [](double s, const Vec3& x, const MultiIndex& b) -> double {
        if (b == MultiIndex{0, 0, 0}) return x[0] * x[0] + s * x[1];
        if (b == MultiIndex{1, 0, 0}) return 2 * x[0];
        if (b == MultiIndex{0, 1, 0}) return s;
        if (b == MultiIndex{2, 0, 0}) return 2.0;
        return 0.0;
    };
    const ScalarField v = ScalarField::analytic(f, Support{single_box(kWide)}, df);
    const Vec3 x{0.4, -0.7, 0.1};
    const double t = 0.8;
    // d/dt (t x1^2 + mu t^2 + t^2 x2 / 2)
    CHECK(heat_propagate(v, mu, t, x, {1, {0, 0, 0}}, q) == doctest::Approx(x[0] * x[0] + 2 * mu * t + t * x[1]).epsilon(1e-12));
    CHECK(heat_propagate(v, mu, t, x, {1, {1, 0, 0}}, q) == doctest::Approx(2 * x[0]).epsilon(1e-12));
}

TEST_CASE("heat propagation rejects bad arguments") {
    const HeatQuadrature q;
    const ScalarField v = wide([](double, const Vec3&) { return 1.0; }, 0.5);
    CHECK_THROWS_AS(heat_propagate(v, 0.1, 0.6, {0, 0, 0}, {}, q), DomainError);
    CHECK_THROWS_AS(heat_propagate(v, 0.1, -0.1, {0, 0, 0}, {}, q), DomainError);
    CHECK_THROWS_AS(heat_propagate(v, 0.0, 0.1, {0, 0, 0}, {}, q), ParameterError);
    CHECK_THROWS_AS(heat_propagate(v, 0.1, 0.1, {0, 0, 0}, {0, {3, 2, 0}}, q), ParameterError);
    CHECK_THROWS_AS(heat_propagate(v, 0.1, 0.1, {0, 0, 0}, {2, {0, 0, 0}}, q), ParameterError);
}

TEST_CASE("zero density propagates to zero") {
    const HeatQuadrature q;
    CHECK(heat_propagate(ScalarField::zero(), 0.1, 0.5, {0, 0, 0}, {0, {1, 1, 0}}, q) == 0.0);
}

TEST_CASE("grid propagation reproduces quadratic densities away from the faces") {
    Grid g;
    g.box = kWide;
    g.T = 1.0;
    g.n = {5, 25, 25, 25};
    const double mu = 0.05;
    auto f = [](double s, const Vec3& x) { return x[0] * x[0] - 0.5 * x[1] * x[2] + s; };
    const GridData v = sample(ScalarField::analytic(f, std::nullopt), g);
    const auto betas = multi_indices(0, 2);
    const auto out = heat_propagate_grid(v, mu, betas, HeatQuadrature());
    const ScalarField vf = wide(f);
    const HeatQuadrature q;
    for (std::size_t bi = 0; bi < betas.size(); ++bi)
        for (const auto& ijk : {std::array<int, 3>{12, 12, 12}, std::array<int, 3>{8, 15, 10}}) {
            const Vec3 x = g.node(ijk[0], ijk[1], ijk[2]);
            const double ref = heat_propagate(vf, mu, 1.0, x, {0, betas[bi]}, q);
            CHECK(out[bi].at(4, ijk[0], ijk[1], ijk[2]) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
        }
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.spatial_size(); ++i) s = std::max(s, std::abs(out[bi].slice(0)[i]));
        CHECK(s == 0.0);
    }
}

TEST_CASE("residual decays only for the declared source sign") {
    const double mu = 0.1;
    std::vector<GridData> h2s, vs;
    const Box b{{-1, -1, -1}, {1, 1, 1}};
    const ScalarField v = ScalarField::analytic(
        [](double s, const Vec3& x) { return (1 + s) * poly_bump(x, {0, 0, 0}, 0.9); }, Support{single_box(b, 0.5)});
    for (int n : {9, 17}) {
        Grid g;
        g.box = b;
        g.T = 0.5;
        g.n = {n, n, n, n};
        const GridData vd = sample(v, g);
        h2s.push_back(heat_propagate_grid(vd, mu, {{0, 0, 0}}, HeatQuadrature(24, 10))[0]);
        vs.push_back(vd);
    }
    const auto rep = resolve_heat_sign(h2s, vs, mu);
    MESSAGE("sign residuals +: " << rep.plus_sup[0] << " " << rep.plus_sup[1] << "  -: " << rep.minus_sup[0] << " "
                                 << rep.minus_sup[1]);
    CHECK(rep.sign == kHeatSourceSign);
    CHECK(rep.minus_sup[1] < rep.minus_sup[0]);
    CHECK(rep.plus_sup[1] > 0.5);
}
