#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nsfp/errors.hpp"
#include "nsfp/quadrature.hpp"

using namespace nsfp;

TEST_CASE("gauss_hermite integrates even monomials against exp(-x^2)") {
    const auto q = gauss_hermite(10);
    CHECK(q.nodes.size() == 10);
    for (int k = 0; k <= 9; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], 2 * k);
        const double exact = std::tgamma(k + 0.5);
        CHECK(std::abs(s - exact) <= 1e-12 * exact);
    }
}

TEST_CASE("gauss_hermite nodes are symmetric") {
    const auto q = gauss_hermite(11);
    for (int i = 0; i < 11; ++i) {
        CHECK(std::abs(q.nodes[i] + q.nodes[10 - i]) < 1e-13);
        CHECK(std::abs(q.weights[i] - q.weights[10 - i]) < 1e-13);
    }
}

TEST_CASE("gauss_legendre is exact up to degree 2n-1 on a shifted interval") {
    const auto q = gauss_legendre(8, 0.0, 2.0);
    for (int k = 0; k <= 15; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
        const double exact = std::pow(2.0, k + 1) / (k + 1);
        CHECK(std::abs(s - exact) <= 1e-12 * exact);
    }
}

TEST_CASE("hermite polynomials match explicit forms") {
    for (double x : {-1.3, 0.0, 0.4, 2.1}) {
        CHECK(hermite(0, x) == doctest::Approx(1.0));
        CHECK(hermite(1, x) == doctest::Approx(2 * x));
        CHECK(hermite(2, x) == doctest::Approx(4 * x * x - 2));
        CHECK(hermite(3, x) == doctest::Approx(8 * x * x * x - 12 * x));
        CHECK(hermite(4, x) == doctest::Approx(16 * std::pow(x, 4) - 48 * x * x + 12));
    }
}

TEST_CASE("invalid quadrature orders are rejected") {
    CHECK_THROWS_AS(gauss_hermite(0), ParameterError);
    CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
}
