#pragma once

#include <Eigen/Dense>

#include "nsfp/errors.hpp"

namespace nsfp {

// Count of singular values above rel_tol times the largest one.
template <typename Matrix>
int numeric_rank(const Matrix& m, double rel_tol) {
    if (!(rel_tol > 0)) throw ParameterError("linalg", "rank tolerance must be positive");
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++r;
    return r;
}

}  // namespace nsfp
