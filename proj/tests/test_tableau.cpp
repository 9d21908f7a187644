#include <random>

#include "doctest.h"
#include "manufactured.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/finite_diff.hpp"
#include "nsfp/tableau.hpp"

using namespace nsfp;

namespace {

std::vector<int> nonzeros(const Eigen::VectorXd& v) {
    std::vector<int> idx;
    for (int i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) idx.push_back(i + 1);
    return idx;
}

}  // namespace

TEST_CASE("alpha vectors carry exactly the dictionary positions") {
    const auto t = build_tableau(1.0, 1.0);
    const Eigen::VectorXd a1 = t.alpha_vec(1);
    CHECK(nonzeros(a1) == std::vector<int>{5, 10});
    CHECK(a1(4) == 1.0);
    CHECK(a1(9) == 1.0);

    const auto t2 = build_tableau(2.0, 0.5);
    const Eigen::VectorXd a2 = t2.alpha_vec(2);
    CHECK(nonzeros(a2) == std::vector<int>{13, 18, 19, 20, 47, 48, 49});
    CHECK(a2(12) == 0.5);
    for (int i : {18, 19, 20}) CHECK(a2(i - 1) == -2.0);
    CHECK(nonzeros(t2.alpha_vec(3)) == std::vector<int>{14, 28, 29, 30, 50, 51, 52});
    CHECK(nonzeros(t2.alpha_vec(4)) == std::vector<int>{15, 38, 39, 40, 53, 54, 55});
}

TEST_CASE("non-positive constants are rejected") {
    CHECK_THROWS_AS(build_tableau(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(build_tableau(1.0, -1.0), ParameterError);
}

TEST_CASE("A times A_eta vanishes exactly and A_eta has full column rank") {
    for (auto [mu, tau] : {std::pair{1.0, 1.0}, {3.0, 0.25}, {0.013, 7.5}}) {
        const auto t = build_tableau(mu, tau);
        CHECK((t.A * t.A_eta).cwiseAbs().maxCoeff() == 0.0);
        CHECK(t.A.leftCols(4) == Eigen::MatrixXd::Identity(4, 4));
        const auto rep = verify_tableau(t);
        CHECK(rep.A_eta_rank == 55);
        CHECK(rep.all_pass());
    }
}

TEST_CASE("general solution form reproduces beta for arbitrary z") {
    const auto t = build_tableau(1.7, 0.4);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int s = 0; s < 20; ++s) {
        const Vec3 F{U(rng), U(rng), U(rng)};
        Eigen::VectorXd z(kZ);
        for (int i = 0; i < kZ; ++i) z(i) = U(rng);
        Eigen::VectorXd beta(4);
        beta << 0, F[0], F[1], F[2];
        CHECK((t.A * (t.X0(F) + t.A_eta * z) - beta).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("H family rows match the printed listing and a perturbation is detected") {
    auto t = build_tableau(1.0, 1.0);
    CHECK(verify_tableau(t).h_family_rows_match);
    t.H[0](4, 0) += 1e-3;
    const auto rep = verify_tableau(t);
    CHECK_FALSE(rep.h_family_rows_match);
    CHECK_FALSE(rep.all_pass());
    REQUIRE(rep.mismatches.size() == 1);
    CHECK(rep.mismatches[0].find("H row 5") != std::string::npos);
}

TEST_CASE("forcing templates") {
    const auto t = build_tableau(1.0, 1.0);
    const Eigen::VectorXd h = t.h({1, 2, 3});
    const Eigen::VectorXd h0 = t.h0({1, 2, 3});
    CHECK(nonzeros(h) == std::vector<int>{2, 3, 4});
    CHECK(h(1) == 1);
    CHECK(h(3) == 3);
    CHECK(nonzeros(h0) == std::vector<int>{7, 11, 15});
    CHECK(h0(10) == 2);
}

TEST_CASE("quadratic residual examples") {
    const auto t = build_tableau(1.0, 1.0);
    std::array<double, kZ> z{};
    for (double r : quadratic_residual(t, z)) CHECK(r == 0.0);
    z[0] = 3;   // d2 u1
    z[6] = 5;   // u2
    z[47] = 15; // u2 d2 u1
    CHECK(quadratic_residual(t, z)[1] == 0.0);
    z[47] = 14;
    CHECK(quadratic_residual(t, z)[1] == -1.0);
    // the first constraint pairs u1 with -alpha1 = d1 u1
    std::array<double, kZ> w{};
    w[2] = 2;   // u1
    w[4] = 1;   // d2 u2
    w[9] = 0.5; // d3 u3
    w[46] = -3; // u1 d1 u1 = 2 * (-1.5)
    CHECK(quadratic_residual(t, w)[0] == doctest::Approx(0.0));
}

TEST_CASE("quadratic residual scales between s and s^2") {
    const auto t = build_tableau(1.3, 0.7);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    std::array<double, kZ> z{};
    for (auto& x : z) x = U(rng);
    const auto r1 = quadratic_residual(t, z);
    const double s = 2.5;
    std::array<double, kZ> zs = z;
    for (auto& x : zs) x *= s;
    const auto rs = quadratic_residual(t, zs);
    for (int j = 0; j < 9; ++j) {
        const double target = z[t.quad_pairs[j].target - 1];
        const double product = target - r1[j];
        CHECK(rs[j] == doctest::Approx(s * target - s * s * product).epsilon(1e-12));
    }
}

TEST_CASE("linear system residual: zero and constant fields") {
    const auto t = build_tableau(1.0, 2.0);
    const Grid g = testing::cube_grid(4);
    std::vector<GridData> Z(kZ, GridData(g));
    std::array<GridData, 3> F{GridData(g), GridData(g), GridData(g)};
    for (const auto& r : linear_system_residual(t, Z, F)) CHECK(r.sup_norm() == 0.0);

    Eigen::VectorXd zc(kZ);
    for (int i = 0; i < kZ; ++i) {
        zc(i) = 0.1 * (i + 1) - 2.0;
        Z[i] = GridData(g, zc(i));
    }
    const auto res = linear_system_residual(t, Z, F);
    REQUIRE(res.size() == 64);
    const Eigen::VectorXd h0z = t.H[1] * zc;
    for (int i = 0; i < kRows; ++i) CHECK(res[i].at(1, 1, 1, 1) == doctest::Approx(-h0z(i)));
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd hkz = t.H[2 + k] * zc;
        for (int i = 0; i < kRows; ++i) CHECK(res[16 * (k + 1) + i].at(2, 1, 2, 1) == doctest::Approx(-hkz(i)));
    }
}

TEST_CASE("linear system residual rejects coarse grids") {
    const auto t = build_tableau(1.0, 1.0);
    Grid g = testing::cube_grid(4);
    g.n[2] = 2;
    std::vector<GridData> Z(kZ, GridData(g));
    std::array<GridData, 3> F{GridData(g), GridData(g), GridData(g)};
    CHECK_THROWS_AS(linear_system_residual(t, Z, F), GridError);
}

TEST_CASE("linear system residual converges at second order for a manufactured flow") {
    const testing::ManufacturedFlow flow;
    const auto t = build_tableau(flow.mu, flow.tau);
    std::vector<double> errs;
    for (int n : {5, 9, 17}) {
        const Grid g = testing::cube_grid(n);
        std::vector<GridData> Z(kZ, GridData(g));
        std::array<GridData, 3> F{GridData(g), GridData(g), GridData(g)};
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        const Vec3 x = g.node(i, j, k);
                        for (int c = 1; c <= kZ; ++c) Z[c - 1].at(m, i, j, k) = flow.z(c, g.t(m), x);
                        for (int a = 0; a < 3; ++a) F[a].at(m, i, j, k) = flow.forcing(a, g.t(m), x);
                    }
        double e = 0.0;
        for (const auto& r : linear_system_residual(t, Z, F)) e = std::max(e, summarize_interior(r, true).sup);
        errs.push_back(e);
    }
    const double order = observed_order(errs[1], errs[2]);
    MESSAGE("linear system residual errors ", errs[0], " ", errs[1], " ", errs[2], " order ", order);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("solvability check") {
    const auto t = build_tableau(1.0, 1.0);
    std::vector<Eigen::VectorXd> betas;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int s = 0; s < 5; ++s) betas.push_back(Eigen::Vector4d(0, U(rng), U(rng), U(rng)));
    CHECK(solvability_check(t.A, betas));
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, kX);
    CHECK_FALSE(solvability_check(zero, {Eigen::Vector4d(1, 0, 0, 0)}));
    CHECK(solvability_check(zero, {Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero()}));
    CHECK_THROWS_AS(solvability_check(zero, {}), ParameterError);
}

TEST_CASE("tableau dump lists exact entries") {
    const std::string d = dump_tableau(build_tableau(2.0, 0.5));
    CHECK(d.find("alpha1 = 5:1 10:1\n") != std::string::npos);
    CHECK(d.find("alpha2 = 13:tau 18:-mu 19:-mu 20:-mu 47:1 48:1 49:1\n") != std::string::npos);
    CHECK(d.find("H0[7] = 13:-tau 18:mu 19:mu 20:mu 47:-1 48:-1 49:-1\n") != std::string::npos);
    CHECK(d.find("z48 = z7 * (1:1)\n") != std::string::npos);
    CHECK(d.find("z47 = z3 * (5:-1 10:-1)\n") != std::string::npos);
    CHECK(d.find("h0 = 0 0 0 0 0 0 F1 0 0 0 F2 0 0 0 F3 0\n") != std::string::npos);
}
