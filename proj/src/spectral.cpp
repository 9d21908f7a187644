#include "nsfp/spectral.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "nsfp/errors.hpp"
#include "nsfp/linalg.hpp"

namespace nsfp {

namespace {

const cplx I{0.0, 1.0};

void require_spatial(const Frequency& f) {
    if (f.spatial_norm2() == 0.0)
        throw SingularFrequencyError("spectral_system", "spatial frequency (xi1, xi2, xi3) is zero");
}

const ConstantTableau& template_tableau() {
    static const ConstantTableau t = build_tableau(1.0, 1.0);
    return t;
}

}  // namespace

ABPair eval_ab(const Frequency& f, double mu, double tau) {
    require_spatial(f);
    const double k2 = f.spatial_norm2();
    ABPair r;
    r.a = (mu * (-k2) - I * f.xi[0]) / tau;
    r.b = -k2 / r.a;
    return r;
}

SpectralMatrix build_B(const Frequency& f, const ConstantTableau& t) {
    SpectralMatrix B;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < kRows; ++i)
            for (int c = 0; c < kZ; ++c)
                B(16 * k + i, c) = I * f.xi[k] * t.H[0](i, c) - t.H[1 + k](i, c);
    return B;
}

SpectralRhs build_G(const Frequency& f, const Fhat& F) {
    const ConstantTableau& t = template_tableau();
    SpectralRhs G = SpectralRhs::Zero();
    for (int i = 0; i < kRows; ++i) {
        const cplx hF = t.h_template[i] ? F[t.h_template[i] - 1] : cplx(0.0);
        const cplx h0F = t.h0_template[i] ? F[t.h0_template[i] - 1] : cplx(0.0);
        G(i) = h0F - I * f.xi[0] * hF;
        for (int k = 1; k < 4; ++k) G(16 * k + i) = -I * f.xi[k] * hF;
    }
    return G;
}

SpectralVector assemble_pattern(const Frequency& f, const BaseAmplitudes& y) {
    SpectralVector v = SpectralVector::Zero();
    for (int c = 1; c <= kZ; ++c) {
        const Component& comp = component(c);
        cplx base;
        switch (comp.base) {
            case Base::U1: base = y.u1; break;
            case Base::U2: base = y.u2; break;
            case Base::U3: base = y.u3; break;
            case Base::P: base = y.p; break;
            default: continue;
        }
        cplx m = std::pow(I * f.xi[0], comp.time_order);
        for (int a = 0; a < 3; ++a) m *= std::pow(I * f.xi[a + 1], comp.beta[a]);
        v(c - 1) = m * base;
    }
    return v;
}

SpectralVector particular_Y1(const Frequency& f, const Fhat& F, double mu, double tau) {
    const ABPair ab = eval_ab(f, mu, tau);
    const cplx a = ab.a, b = ab.b;
    const cplx ixi[3] = {I * f.xi[1], I * f.xi[2], I * f.xi[3]};
    const cplx div = ixi[0] * F[0] + ixi[1] * F[1] + ixi[2] * F[2];
    BaseAmplitudes y;
    y.u1 = ixi[0] * div / (a * a * b * tau) - F[0] / (a * tau);
    y.u2 = ixi[1] * div / (a * a * b * tau) - F[1] / (a * tau);
    y.u3 = ixi[2] * div / (a * a * b * tau) - F[2] / (a * tau);
    y.p = div / (a * b * tau);
    return assemble_pattern(f, y);
}

SpectralVector null_eta(int j, const Frequency& f, double mu, double tau) {
    if (j < 1 || j > 9) throw ParameterError("spectral_system", "null vector index must be in 1..9");
    const ABPair ab = eval_ab(f, mu, tau);
    const cplx a = ab.a, b = ab.b;
    const int g = (j - 1) / 3;  // momentum equation the product slot feeds
    const cplx ixi[3] = {I * f.xi[1], I * f.xi[2], I * f.xi[3]};
    cplx ym[3];
    for (int m = 0; m < 3; ++m)
        ym[m] = -ixi[m] * ixi[g] / (a * a * b * tau) + (m == g ? 1.0 / (a * tau) : cplx(0.0));
    BaseAmplitudes y{ym[0], ym[1], ym[2], -ixi[g] / (a * b * tau)};
    SpectralVector v = assemble_pattern(f, y);
    v(46 + j - 1) = 1.0;
    return v;
}

int numeric_rank(const SpectralMatrix& m, double rel_tol) {
    return numeric_rank<Eigen::MatrixXcd>(Eigen::MatrixXcd(m), rel_tol);
}

FrequencyRecord certify_frequency(const Frequency& f, const Fhat& F, const ConstantTableau& t,
                                  double rank_tol) {
    FrequencyRecord r;
    r.f = f;
    const SpectralMatrix B = build_B(f, t);
    const Eigen::MatrixXcd Bdyn = B;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Bdyn);
    const auto& s = svd.singularValues();
    const double normB = s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rank_tol * normB) ++r.rank;

    Eigen::Matrix<cplx, kZ, 9> etas;
    for (int j = 1; j <= 9; ++j) {
        etas.col(j - 1) = null_eta(j, f, t.mu, t.tau);
        r.null_residual = std::max(r.null_residual, (B * etas.col(j - 1)).norm() / normB);
    }
    const Eigen::Matrix<cplx, 9, 9> gram = etas.adjoint() * etas;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 9, 9>> es(gram);
    r.eta_gram_rcond = es.eigenvalues()(0) / es.eigenvalues()(8);

    const SpectralVector Y1 = particular_Y1(f, F, t.mu, t.tau);
    const SpectralRhs G = build_G(f, F);
    r.particular_residual = (B * Y1 - G).norm() / G.norm();
    r.divergence_residual =
        std::abs(I * f.xi[1] * Y1(2) + I * f.xi[2] * Y1(6) + I * f.xi[3] * Y1(10));
    return r;
}

std::vector<Frequency> sample_frequencies(int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<Frequency> out;
    const std::vector<Frequency> special = {
        {{0.0, 1.0, 0.0, 0.0}},   {{0.0, 0.0, 1.0, 0.0}},   {{0.0, 0.0, 0.0, 1.0}},
        {{0.0, 0.3, -0.7, 1.1}},  {{100.0, 0.01, 0.0, 0.0}}, {{0.01, 0.0, 0.0, 100.0}},
    };
    const int random_count = std::max(0, count - static_cast<int>(special.size()));
    while (static_cast<int>(out.size()) < random_count) {
        const double r = std::pow(10.0, U(rng));
        Frequency f;
        double n2 = 0.0;
        for (auto& x : f.xi) {
            x = N(rng);
            n2 += x * x;
        }
        for (auto& x : f.xi) x *= r / std::sqrt(n2);
        if (f.spatial_norm2() < 1e-12 * r * r) continue;
        out.push_back(f);
    }
    for (std::size_t i = 0; static_cast<int>(out.size()) < count && i < special.size(); ++i)
        out.push_back(special[i]);
    return out;
}

std::string certificate_csv(const std::vector<FrequencyRecord>& records) {
    std::ostringstream os;
    os << "xi0,xi1,xi2,xi3,rank,null_residual,particular_residual,divergence_residual\n";
    for (const auto& r : records)
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{},{:.6e},{:.6e},{:.6e}\n", r.f.xi[0], r.f.xi[1],
                          r.f.xi[2], r.f.xi[3], r.rank, r.null_residual, r.particular_residual,
                          r.divergence_residual);
    return os.str();
}

}  // namespace nsfp
