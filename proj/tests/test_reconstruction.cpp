#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "manufactured.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/reconstruction.hpp"

using namespace nsfp;
using nsfp::testing::cube_grid;
using nsfp::testing::ManufacturedFlow;
using nsfp::testing::single_box;

namespace {

FlowFields manufactured_fields(const ManufacturedFlow& mf, const Grid& g, std::array<GridData, 3>& F) {
    FlowFields flow;
    flow.grid = g;
    for (int c = 0; c < 4; ++c) flow.f[c] = GridData(g);
    for (auto& f : F) f = GridData(g);
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < g.n[1]; ++i)
            for (int j = 0; j < g.n[2]; ++j)
                for (int k = 0; k < g.n[3]; ++k) {
                    const Vec3 x = g.node(i, j, k);
                    for (int c = 0; c < 4; ++c) flow.f[c].at(m, i, j, k) = mf.d(c, 0, {0, 0, 0}, g.t(m), x);
                    for (int c = 0; c < 3; ++c) F[c].at(m, i, j, k) = mf.forcing(c, g.t(m), x);
                }
    return flow;
}

WTable scaled_table(const Grid& g, double base) {
    WTable t;
    for (int i = 1; i <= 16; ++i) t.w[i] = GridData(g, base + i);
    return t;
}

FlowFields constant_flow(const Grid& g, double v) {
    FlowFields f;
    f.grid = g;
    for (auto& c : f.f) c = GridData(g, v);
    return f;
}

}  // namespace

TEST_CASE("zero tables give zero fields") {
    const Grid g = cube_grid(4);
    WTable z;
    for (int i = 1; i <= 16; ++i) z.w[i] = GridData(g);
    const FlowFields f = reconstruct(z, z);
    for (const auto& c : f.f) CHECK(c.sup_norm() == 0.0);
}

TEST_CASE("reconstruction picks the velocity and pressure rows and is linear") {
    const Grid g = cube_grid(3);
    const WTable a = scaled_table(g, 0.0), b = scaled_table(g, 100.0);
    const FlowFields f = reconstruct(a, b);
    CHECK(f.u(0).at(0, 0, 0, 0) == 7 + 107);
    CHECK(f.u(1).at(1, 1, 1, 1) == 11 + 111);
    CHECK(f.u(2).at(2, 2, 2, 2) == 15 + 115);
    CHECK(f.p().at(0, 2, 1, 0) == 16 + 116);
    WTable a2 = a;
    a2 *= 2.0;
    const FlowFields f2 = reconstruct(a2, b);
    CHECK(f2.u(0).at(0, 0, 0, 0) - f.u(0).at(0, 0, 0, 0) == 7);

    WTable other = scaled_table(cube_grid(4), 0.0);
    CHECK_THROWS_AS(reconstruct(a, other), GridError);
}

TEST_CASE("zero flow with zero forcing has zero residual") {
    const Grid g = cube_grid(5);
    const std::array<GridData, 3> F{GridData(g), GridData(g), GridData(g)};
    const auto r = ns_residual(constant_flow(g, 0.0), F, 0.3, 1.2);
    CHECK(r.sup() == 0.0);
    CHECK_THROWS_AS(ns_residual(constant_flow(cube_grid(2), 0.0), std::array<GridData, 3>{}, 0.3, 1.0), GridError);
}

TEST_CASE("manufactured Navier-Stokes solution has a second-order residual") {
    const ManufacturedFlow mf;
    double sup[2];
    int level = 0;
    for (int n : {9, 17}) {
        const Grid g = cube_grid(n);
        std::array<GridData, 3> F;
        const FlowFields flow = manufactured_fields(mf, g, F);
        sup[level++] = ns_residual(flow, F, mf.mu, mf.tau).sup();
    }
    const double order = observed_order(sup[0], sup[1]);
    MESSAGE("residual sups " << sup[0] << " " << sup[1] << " order " << order);
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("swapping x1 and x2 in the forcing swaps u1 and u2") {
    const Domain K = single_box({{0, 0, 0}, {0.5, 0.5, 0.5}}, 0.3);
    Grid g;
    g.box = K.boxes[0];
    g.T = 0.3;
    g.n = {5, 9, 9, 9};
    EngineSettings s;
    s.mu = 0.05;
    ForcingSpec f;
    f.preset = "polynomial-bump";
    f.amplitude = 1.0;
    f.center = {0.22, 0.27, 0.25};
    f.radius = 0.15;
    f.direction = {1.0, 0.3, 0.2};
    ForcingSpec fs = f;
    fs.center = {0.27, 0.22, 0.25};
    fs.direction = {0.3, 1.0, 0.2};
    WTable zero;
    for (int i = 1; i <= 16; ++i) zero.w[i] = GridData(g);
    const FlowFields a = reconstruct(forcing_potentials(make_forcing(f, K), K, g, s), zero);
    const FlowFields b = reconstruct(forcing_potentials(make_forcing(fs, K), K, g, s), zero);
    double diff = 0.0;
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                for (int k = 0; k < 9; ++k) {
                    diff = std::max(diff, std::abs(b.u(0).at(m, i, j, k) - a.u(1).at(m, j, i, k)));
                    diff = std::max(diff, std::abs(b.u(1).at(m, i, j, k) - a.u(0).at(m, j, i, k)));
                    diff = std::max(diff, std::abs(b.u(2).at(m, i, j, k) - a.u(2).at(m, j, i, k)));
                    diff = std::max(diff, std::abs(b.p().at(m, i, j, k) - a.p().at(m, j, i, k)));
                }
    CHECK(a.u(0).sup_norm() > 0.0);
    CHECK(diff <= 1e-10 * a.u(0).sup_norm());
}

TEST_CASE("single piece assembly is the identity with an empty mask") {
    const Grid g = cube_grid(5);
    FlowFields f = constant_flow(g, 0.0);
    for (int m = 0; m < 5; ++m)
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k) f.f[0].at(m, i, j, k) = g.t(m) + g.x(0, i) + 2 * g.x(1, j);
    const auto flow = assemble_global({g.box}, {f});
    const auto v = flow.eval(0.5, {0.3, 0.6, 0.2});
    REQUIRE(v.has_value());
    CHECK((*v)[0] == doctest::Approx(0.5 + 0.3 + 1.2));
    CHECK(flow.mask_fraction(cube_grid(9)) == 0.0);
    const auto outside = flow.eval(0.5, {1.5, 0.5, 0.5});
    REQUIRE(outside.has_value());
    CHECK((*outside)[0] == 0.0);
}

TEST_CASE("interfaces between pieces are undefined and have vanishing measure") {
    const Box left{{0, 0, 0}, {0.5, 1, 1}}, right{{0.5, 0, 0}, {1, 1, 1}};
    Grid gl, gr;
    gl.box = left;
    gr.box = right;
    gl.n = gr.n = {3, 5, 9, 9};
    const auto flow = assemble_global({left, right}, {constant_flow(gl, 1.0), constant_flow(gr, 2.0)});
    CHECK_FALSE(flow.eval(0.2, {0.5, 0.3, 0.7}).has_value());
    CHECK((*flow.eval(0.2, {0.25, 0.3, 0.7}))[0] == 1.0);
    CHECK((*flow.eval(0.2, {0.75, 0.3, 0.7}))[3] == 2.0);
    CHECK(flow.eval(0.2, {1.0, 0.3, 0.7}).has_value());
    double prev = 1.0;
    for (int n : {5, 9, 17, 33}) {
        const double frac = flow.mask_fraction(cube_grid(n));
        CHECK(frac > 0.0);
        CHECK(frac < prev);
        prev = frac;
    }
    CHECK(prev < 0.07);
}

TEST_CASE("overlapping pieces are rejected") {
    const Box a{{0, 0, 0}, {0.6, 1, 1}}, b{{0.5, 0, 0}, {1, 1, 1}};
    const Grid g = cube_grid(3);
    CHECK_THROWS_AS(assemble_global({a, b}, {constant_flow(g, 0), constant_flow(g, 0)}), PartitionError);
}
