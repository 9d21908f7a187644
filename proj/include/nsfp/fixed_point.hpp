#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsfp/bounds.hpp"
#include "nsfp/forcing.hpp"
#include "nsfp/geometry.hpp"
#include "nsfp/heat.hpp"
#include "nsfp/newtonian.hpp"

namespace nsfp {

using NineField = std::array<GridData, 9>;

NineField zero_nine(const Grid& g);
double sup_norm(const NineField& f);
double sup_distance(const NineField& a, const NineField& b);

// Sixteen derived fields of a potential P (1-based, w[0] unused):
//   U_m = d_m div P - Lap P_m
//   w1 = -(d2 U2 + d3 U3), w5 = d2 U1, w6 = d3 U1, w7 = U1,
//   w8..w10 = grad U2, w11 = U2, w12..w14 = grad U3, w15 = U3, w16 = div v / tau.
// w2..w4 = -(tau d_j w16 - mu Lap U_j) are filled only when verification rows are requested.
struct WTable {
    std::array<GridData, 17> w;
    bool verification_rows = false;

    const GridData& operator[](int i) const { return w[i]; }
    GridData& operator[](int i) { return w[i]; }
    WTable& operator*=(double s);
};

struct EngineSettings {
    double mu = 1.0;
    double tau = 1.0;
    HeatQuadrature quad{};
    bool verification_rows = false;
};

// Table of the lift P_m = kHeatSourceSign * H[v_m], v_m the Newtonian potential of densities[m].
WTable potential_table(const std::array<CellField, 3>& densities, const EngineSettings& s);

// Forcing table W1. check_outer_support runs the boundary check of F against K.
WTable forcing_potentials(const VectorField& F, const Domain& K, const Grid& g, const EngineSettings& s,
                          bool check_outer_support = true);

// Lifts of the nine Newtonian potentials of h1 (values only).
NineField lift_h2(const NineField& h1, const EngineSettings& s);

// Table W2 = -table(h3), h3_m the lift of the sum of h1 over j = 3m+1..3m+3.
WTable response_table(const NineField& h1, const EngineSettings& s);

// g_j = (L1 + L2)(R1 + R2) with the left factor w7, w11, w15 cycling with k and the right
// factor w1, w5, w6, w8, w9, w10, w12, w13, w14 running with j. Nodes outside K are zeroed.
NineField combine_g(const WTable* w1, const WTable& w2, const Domain& K);

// g(h1); with w1 == nullptr the forcing part is dropped, which yields the quadratic part Q(h1, h1).
NineField apply_g(const NineField& h1, const WTable* w1, const Domain& K, const EngineSettings& s);

struct HolderBudget {
    double M = 1.0;
    double C = 2.0;
    double C1 = 1.0;
    double alpha = 0.5;

    void validate() const;
};

struct HolderEstimate {
    double sup = 0.0;
    double constant = 0.0;
};

// Largest |f(a) - f(b)| / |a - b|^alpha over random node pairs (space-time distance), half of
// them short-range, maximised over the nine components.
HolderEstimate holder_estimate(const NineField& f, double alpha, int pairs = 2000, unsigned long long seed = 1);
HolderEstimate holder_estimate(const GridData& f, double alpha, int pairs = 2000, unsigned long long seed = 1);
// Same for a field on its support box, sampled at random points.
HolderEstimate holder_estimate(const ScalarField& f, const Domain& support, double alpha, int pairs = 2000,
                               unsigned long long seed = 1);

struct SmallnessReport {
    double x = 0.0;  // M_T3 * M(K1)
    double lhs_M = 0.0, rhs_M = 0.0;
    double lhs_C = 0.0, rhs_C = 0.0;
    double lhs_contraction = 0.0;
    bool pass_self_map = false;     // both self-map inequalities
    bool pass_contraction = false;  // contraction inequality
    double margin_self_map = 0.0;   // min(rhs_M - lhs_M, rhs_C - lhs_C)
    double margin_contraction = 0.0;

    bool pass() const { return pass_self_map && pass_contraction; }
};

// Self-map:    M/2 + M x + x^2 <= M  and  C1 + 2 [(M/2) M_T4 M(K1) + C1 x + x M_T4 M(K1)] <= C
// Contraction: (M/2 + x) 2 x / M < 1
SmallnessReport smallness_check(const BoundConstants& b, const HolderBudget& budget);

struct PicardOptions {
    double tol = 1e-8;
    int max_iter = 50;
    bool stop_on_budget = false;
    int holder_pairs = 2000;
    unsigned long long seed = 1;
};

struct TraceRow {
    int iteration = 0;
    double delta = 0.0;
    double sup = 0.0;
    double holder = 0.0;
    bool in_omega_c = false;
    double elapsed = 0.0;
};

enum class PicardStatus { Converged, MaxIterations, Diverged, BudgetViolated };
std::string to_string(PicardStatus s);

struct PicardResult {
    PicardStatus status = PicardStatus::MaxIterations;
    NineField h;
    WTable w2;
    std::vector<TraceRow> trace;
    // delta_{n+1} / delta_n.
    std::vector<double> ratios() const;
};

// h0 = 0, h_{n+1} = g(h_n). Divergence: three consecutive growing deltas or a non-finite value.
// Leaving Omega_C is recorded in the trace; it stops the iteration only with stop_on_budget.
PicardResult picard(const WTable& w1, const Domain& K, const Grid& g, const EngineSettings& s,
                    const HolderBudget& budget, const PicardOptions& opt);

// Random smooth fields with sup <= M on the grid, zero outside K.
NineField random_bounded_field(const Grid& g, const Domain& K, double M, unsigned long long seed);

// max ||g(a) - g(b)|| / ||a - b|| over random bounded pairs.
double empirical_lipschitz(const WTable& w1, const Domain& K, const Grid& g, const EngineSettings& s, double M,
                           int pairs, unsigned long long seed);

}  // namespace nsfp
