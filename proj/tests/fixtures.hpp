#pragma once

// Shared geometric and field fixtures for the unit tests and the acceptance binary.

#include <cmath>

#include "nsfp/field.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp::testing {

inline Domain ball_columns(double R, int n = 41, double T = 1.0) { return column_ball(R, n, T); }

inline Domain single_box(const Box& b, double T = 1.0) {
    Domain K;
    K.boxes = {b};
    K.T = T;
    return K;
}

// (1 - |x - c|^2 / r^2)^4 inside the ball, 0 outside; C^3 with compact support.
inline double poly_bump(const Vec3& x, const Vec3& c, double r) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
    s /= r * r;
    return s < 1.0 ? std::pow(1.0 - s, 4) : 0.0;
}

}  // namespace nsfp::testing
