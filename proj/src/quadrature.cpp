#include "nsfp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

// Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, int order, double mu0) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    QuadratureRule r;
    r.nodes.resize(order);
    r.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        r.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        r.weights[i] = mu0 * v0 * v0;
    }
    // Symmetrize to remove eigen-solver round-off: both weights are even.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
        const double w = 0.5 * (r.weights[i] + r.weights[j]);
        r.nodes[i] = -x;
        r.nodes[j] = x;
        r.weights[i] = r.weights[j] = w;
    }
    if (order % 2 == 1) r.nodes[order / 2] = 0.0;
    return r;
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
    if (order < 1) throw ParameterError("quadrature", "Gauss-Hermite order must be >= 1");
    Eigen::VectorXd off(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) off(k - 1) = std::sqrt(0.5 * k);
    return golub_welsch(off, order, std::sqrt(M_PI));
}

QuadratureRule gauss_legendre(int order, double a, double b) {
    if (order < 1) throw ParameterError("quadrature", "Gauss-Legendre order must be >= 1");
    Eigen::VectorXd off(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    QuadratureRule r = golub_welsch(off, order, 2.0);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < order; ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

double hermite(int n, double x) {
    if (n == 0) return 1.0;
    double hm1 = 1.0, h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hn = 2.0 * x * h - 2.0 * k * hm1;
        hm1 = h;
        h = hn;
    }
    return h;
}

}  // namespace nsfp
