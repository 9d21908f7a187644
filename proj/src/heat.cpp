#include "nsfp/heat.hpp"

#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

const double kPiMinusHalf = 1.0 / std::sqrt(M_PI);

void check_beta(const MultiIndex& b) {
    for (int a = 0; a < 3; ++a)
        if (b[a] < 0) throw ParameterError("greens_operators", "negative derivative order");
}

// Sum over the Gauss-Hermite tensor of prod_a H_{beta_a}(theta_a) v(tau, x + eps theta), times eps^-|beta|.
double hermite_sum(const ScalarField& v, double tau, const Vec3& x, double eps, const MultiIndex& beta,
                   const QuadratureRule& gh) {
    const int n = static_cast<int>(gh.nodes.size());
    std::vector<double> f[3];
    for (int a = 0; a < 3; ++a) {
        f[a].resize(n);
        for (int i = 0; i < n; ++i) f[a][i] = gh.weights[i] * hermite(beta[a], gh.nodes[i]);
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = f[0][i];
        if (wi == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            const double wij = wi * f[1][j];
            if (wij == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                const double w = wij * f[2][k];
                if (w == 0.0) continue;
                const Vec3 y{x[0] + eps * gh.nodes[i], x[1] + eps * gh.nodes[j], x[2] + eps * gh.nodes[k]};
                acc += w * v(tau, y);
            }
        }
    }
    return acc * std::pow(eps, -order(beta));
}

double spatial_integral(const ScalarField& v, double mu, double t, const Vec3& x, const MultiIndex& beta,
                        const HeatQuadrature& q) {
    if (t <= 0.0) return 0.0;
    const double norm = kPiMinusHalf * kPiMinusHalf * kPiMinusHalf;
    double acc = 0.0;
    for (std::size_t s = 0; s < q.legendre.nodes.size(); ++s) {
        const double sigma = q.legendre.nodes[s];
        const double tau = t * (1.0 - sigma * sigma);
        const double eps = 2.0 * std::sqrt(mu * t) * sigma;
        acc += q.legendre.weights[s] * 2.0 * t * sigma * hermite_sum(v, tau, x, eps, beta, q.hermite);
    }
    return norm * acc;
}

}  // namespace

HeatQuadrature::HeatQuadrature(int lo, int ho) : legendre_order(lo), hermite_order(ho) {
    if (lo < 2 || ho < 2) throw ParameterError("greens_operators", "quadrature orders must be at least 2");
    legendre = gauss_legendre(lo, 0.0, 1.0);
    hermite = gauss_hermite(ho);
}

double heat_propagate(const ScalarField& v, double mu, double t, const Vec3& x, const HeatDeriv& d,
                      const HeatQuadrature& q) {
    if (!(mu > 0)) throw ParameterError("greens_operators", "mu must be positive");
    check_beta(d.beta);
    if (t < 0.0 || (v.support() && t > v.support()->domain.T))
        throw DomainError("greens_operators", "evaluation time outside [0, T]");
    const int k = order(d.beta);
    if (d.time_order == 0) {
        if (k > 4) throw ParameterError("greens_operators", "spatial derivative order above 4 is not supported");
        return spatial_integral(v, mu, t, x, d.beta, q);
    }
    if (d.time_order != 1 || k > 3)
        throw ParameterError("greens_operators", "time derivative supported only once with spatial order <= 3");
    double lap = 0.0;
    for (int a = 0; a < 3; ++a) {
        MultiIndex b = d.beta;
        b[a] += 2;
        lap += spatial_integral(v, mu, t, x, b, q);
    }
    return mu * lap + v.derivative(t, x, d.beta);
}

std::vector<MultiIndex> multi_indices(int min_order, int max_order) {
    std::vector<MultiIndex> out;
    for (int k = min_order; k <= max_order; ++k)
        for (int a = k; a >= 0; --a)
            for (int b = k - a; b >= 0; --b) out.push_back({a, b, k - a - b});
    return out;
}

std::vector<GridData> heat_propagate_grid(const GridData& v, double mu, const std::vector<MultiIndex>& betas,
                                          const HeatQuadrature& q) {
    if (!(mu > 0)) throw ParameterError("greens_operators", "mu must be positive");
    const Grid& g = v.grid;
    if (g.n[0] < 2) throw GridError("greens_operators", "heat grid needs at least 2 time levels");
    int max_order[3] = {0, 0, 0};
    for (const auto& b : betas) {
        check_beta(b);
        if (order(b) > 4) throw ParameterError("greens_operators", "spatial derivative order above 4 is not supported");
        for (int a = 0; a < 3; ++a) max_order[a] = std::max(max_order[a], b[a]);
    }
    const int nx = g.n[1], ny = g.n[2], nz = g.n[3];
    std::vector<GridData> out(betas.size(), GridData(g));
    const auto& gh = q.hermite;
    const int nh = static_cast<int>(gh.nodes.size());

    // 1D matrices M[a][o](i_out, i_node) = eps^-o pi^-1/2 sum_theta w H_o(theta) phi_node(x_i + eps theta).
    auto axis_matrix = [&](int a, int o, double eps) {
        const int n = g.n[a + 1];
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        const double scale = kPiMinusHalf * std::pow(eps, -o);
        for (int i = 0; i < n; ++i)
            for (int s = 0; s < nh; ++s) {
                const double wq = gh.weights[s] * hermite(o, gh.nodes[s]) * scale;
                const Weights1D w = interp_weights(g.x(a, i) + eps * gh.nodes[s], g.box.lo[a], g.h(a), n, Interp::Cubic, 0);
                for (int c = 0; c < w.count; ++c) M(i, w.idx[c]) += wq * w.w[c];
            }
        return M;
    };

    RowMatrix vt(nx * ny, nz);
    for (int m = 1; m < g.n[0]; ++m) {
        const double t = g.t(m);
        for (std::size_t s = 0; s < q.legendre.nodes.size(); ++s) {
            const double sigma = q.legendre.nodes[s];
            const double tau = t * (1.0 - sigma * sigma);
            const double eps = 2.0 * std::sqrt(mu * t) * sigma;
            const double weight = q.legendre.weights[s] * 2.0 * t * sigma;

            double u = tau / g.dt();
            int n0 = static_cast<int>(std::floor(u));
            if (n0 > g.n[0] - 2) n0 = g.n[0] - 2;
            if (n0 < 0) n0 = 0;
            const double lam = u - n0;
            Eigen::Map<const Eigen::VectorXd> a0(v.slice(n0), g.spatial_size());
            Eigen::Map<const Eigen::VectorXd> a1(v.slice(n0 + 1), g.spatial_size());
            Eigen::Map<Eigen::VectorXd>(vt.data(), g.spatial_size()) = (1.0 - lam) * a0 + lam * a1;

            std::vector<Eigen::MatrixXd> M[3];
            for (int a = 0; a < 3; ++a)
                for (int o = 0; o <= max_order[a]; ++o) M[a].push_back(axis_matrix(a, o, eps));

            // Contract x3, then x2, then x1, sharing partial contractions between multi-indices.
            std::map<int, RowMatrix> tz;
            std::map<std::pair<int, int>, RowMatrix> tyz;
            for (std::size_t bi = 0; bi < betas.size(); ++bi) {
                const MultiIndex& b = betas[bi];
                auto itz = tz.find(b[2]);
                if (itz == tz.end()) itz = tz.emplace(b[2], RowMatrix(vt * M[2][b[2]].transpose())).first;
                const auto key = std::make_pair(b[1], b[2]);
                auto ity = tyz.find(key);
                if (ity == tyz.end()) {
                    RowMatrix r(nx * ny, nz);
                    for (int i = 0; i < nx; ++i) r.middleRows(i * ny, ny) = M[1][b[1]] * itz->second.middleRows(i * ny, ny);
                    ity = tyz.emplace(key, std::move(r)).first;
                }
                Eigen::Map<const RowMatrix> yz(ity->second.data(), nx, ny * nz);
                Eigen::Map<RowMatrix> dst(out[bi].slice(m), nx, ny * nz);
                dst.noalias() += weight * (M[0][b[0]] * yz);
            }
        }
    }
    return out;
}

}  // namespace nsfp
