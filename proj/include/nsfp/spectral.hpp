#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsfp/tableau.hpp"

namespace nsfp {

using cplx = std::complex<double>;
using SpectralVector = Eigen::Matrix<cplx, kZ, 1>;
using SpectralMatrix = Eigen::Matrix<cplx, 64, kZ>;
using SpectralRhs = Eigen::Matrix<cplx, 64, 1>;
using Fhat = std::array<cplx, 3>;

// Angular frequencies: xi[0] pairs with t, xi[1..3] with x1..x3.
struct Frequency {
    std::array<double, 4> xi{0, 0, 0, 0};
    double spatial_norm2() const { return xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3]; }
};

struct ABPair {
    cplx a;
    cplx b;
};

ABPair eval_ab(const Frequency& f, double mu, double tau);

SpectralMatrix build_B(const Frequency& f, const ConstantTableau& t);
SpectralRhs build_G(const Frequency& f, const Fhat& F);

// Particular solution; entries 47..55 are zero.
SpectralVector particular_Y1(const Frequency& f, const Fhat& F, double mu, double tau);
// Null vector j = 1..9 with unit tail e_j in positions 47..55.
SpectralVector null_eta(int j, const Frequency& f, double mu, double tau);

// The four base amplitudes (y3, y7, y11, y16) behind the shared 46-entry pattern.
struct BaseAmplitudes {
    cplx u1, u2, u3, p;
};
SpectralVector assemble_pattern(const Frequency& f, const BaseAmplitudes& y);

int numeric_rank(const SpectralMatrix& m, double rel_tol = 1e-8);

struct FrequencyRecord {
    Frequency f;
    int rank = 0;
    double null_residual = 0.0;        // max_j |B eta_j| / |B|
    double particular_residual = 0.0;  // |B Y1 - G| / |G|
    double divergence_residual = 0.0;  // |i xi1 y3 + i xi2 y7 + i xi3 y11|
    double eta_gram_rcond = 0.0;       // conditioning of the eta Gram matrix
};

FrequencyRecord certify_frequency(const Frequency& f, const Fhat& F, const ConstantTableau& t,
                                  double rank_tol = 1e-8);

// Log-uniform magnitudes in [1e-2, 1e2] with uniform directions, followed by axis-aligned
// and zero-time-frequency cases. Always returns exactly `count` samples.
std::vector<Frequency> sample_frequencies(int count, unsigned long long seed);

std::string certificate_csv(const std::vector<FrequencyRecord>& records);

}  // namespace nsfp
