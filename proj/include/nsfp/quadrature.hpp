#pragma once

#include <vector>

namespace nsfp {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes/weights for the weight exp(-x^2) on the real line (weights sum to sqrt(pi)).
QuadratureRule gauss_hermite(int order);
// Nodes/weights on [a, b] for the unit weight.
QuadratureRule gauss_legendre(int order, double a = -1.0, double b = 1.0);

// Physicists' Hermite polynomial H_n(x).
double hermite(int n, double x);

}  // namespace nsfp
