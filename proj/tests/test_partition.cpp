#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/partition.hpp"

using namespace nsfp;
using nsfp::testing::single_box;

namespace {

PartitionSettings settings(int depth = 3) {
    PartitionSettings s;
    s.mu = 0.05;
    s.max_depth = depth;
    return s;
}

double total_volume(const PartitionResult& r) {
    double v = 0.0;
    for (const auto& p : r.pieces) v += p.box.volume();
    return v;
}

}  // namespace

TEST_CASE("a passing domain is its own partition") {
    const Domain K = single_box({{0, 0, 0}, {1, 1, 1}}, 0.5);
    HolderBudget b;
    b.M = 1e-9;
    const auto r = partition_domain(K, b, settings());
    CHECK(r.success);
    CHECK(r.depth == 0);
    REQUIRE(r.pieces.size() == 1);
    CHECK(r.pieces[0].box.lo == K.boxes[0].lo);
}

TEST_CASE("a cube failing by a capacity factor of four needs one bisection") {
    const Domain K = single_box({{0, 0, 0}, {1, 1, 1}}, 0.5);
    HolderBudget b;
    b.M = 5e-6;
    const auto whole = smallness_check(bound_constants(K, 0.05, b.alpha, b.M, 0.0), b);
    REQUIRE_FALSE(whole.pass());
    const auto r = partition_domain(K, b, settings());
    CHECK(r.success);
    CHECK(r.depth == 1);
    CHECK(r.pieces.size() == 8);
    CHECK(total_volume(r) == doctest::Approx(1.0));
    // Capacity scales with the square of the size.
    CHECK(r.pieces[0].constants.M_K1 == doctest::Approx(whole.x / 4 / r.pieces[0].constants.M_T3).epsilon(1e-6));
    for (std::size_t i = 0; i < r.pieces.size(); ++i)
        for (std::size_t j = i + 1; j < r.pieces.size(); ++j) CHECK_FALSE(interiors_overlap(r.pieces[i].box, r.pieces[j].box));
}

TEST_CASE("an unreachable budget ends in a failure report") {
    const Domain K = single_box({{0, 0, 0}, {1, 1, 1}}, 0.5);
    HolderBudget b;
    b.M = 1e3;
    b.C = 2e3;
    const auto r = partition_domain(K, b, settings(2));
    CHECK_FALSE(r.success);
    CHECK(r.depth == 2);
    CHECK(r.failures.size() == 64);
    CHECK(r.worst.smallness.margin_contraction < 0.0);
    CHECK(r.report().find("failure") != std::string::npos);
    CHECK(r.report().find("worst piece") != std::string::npos);
}

TEST_CASE("box unions are partitioned box by box") {
    Domain K;
    K.T = 0.5;
    K.boxes = {Box{{0, 0, 0}, {0.25, 0.25, 0.25}}, Box{{0.25, 0, 0}, {0.5, 0.25, 0.25}}};
    HolderBudget b;
    b.M = 1e-4;
    const auto union_check = smallness_check(bound_constants(K, 0.05, b.alpha, b.M, 0.0), b);
    CHECK_FALSE(union_check.pass());
    const auto r = partition_domain(K, b, settings());
    CHECK(r.success);
    CHECK(r.pieces.size() == 2);
    CHECK(r.domain(0.5).boxes.size() == 2);
    CHECK(total_volume(r) == doctest::Approx(K.volume()));
}

TEST_CASE("invalid partition settings are rejected") {
    const Domain K = single_box({{0, 0, 0}, {1, 1, 1}});
    auto s = settings();
    s.max_depth = -1;
    CHECK_THROWS_AS(partition_domain(K, HolderBudget{}, s), ParameterError);
}
