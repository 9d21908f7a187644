#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsfp/geometry.hpp"

namespace nsfp {

constexpr int kZ = 55;     // unknown functional vector length
constexpr int kX = 59;     // first-order system unknowns (4 + 55)
constexpr int kRows = 16;  // rows of each H-family matrix

// Exact coefficient one + mu_coef*mu + tau_coef*tau with integer parts.
struct Coef {
    int one = 0;
    int mu = 0;
    int tau = 0;

    double value(double mu_v, double tau_v) const { return one + mu * mu_v + tau * tau_v; }
    bool is_zero() const { return one == 0 && mu == 0 && tau == 0; }
    Coef operator-() const { return {-one, -mu, -tau}; }
    Coef& operator+=(const Coef& o);
    bool operator==(const Coef& o) const = default;
    std::string str() const;
};

using ExactRow = std::array<Coef, kZ>;

// What a component of Z stands for: a derivative of u1,u2,u3,p, or an advection product.
enum class Base { U1, U2, U3, P, Product };

struct Component {
    Base base = Base::U1;
    int time_order = 0;
    MultiIndex beta{0, 0, 0};
    int prod_k = 0;  // products only: u_k * d(u_j)/dx_k, 1-based
    int prod_j = 0;
    std::string name;
};

// The 55-entry component dictionary, 1-based access via component(i).
const Component& component(int i);
// 1-based index of the derivative monomial, or 0 if it is not a Z component.
int component_index(Base base, int time_order, const MultiIndex& beta);
// 1-based index of the product u_k * d(u_j)/dx_k.
int product_index(int k, int j);

// Which forcing component (1..3) sits in a template slot; 0 for none.
using ForcingTemplate = std::array<int, kRows>;

struct QuadPair {
    int target = 0;  // 47..55
    int left = 0;    // Z index of the velocity factor
    ExactRow right{};
};

struct ConstantTableau {
    double mu = 1.0;
    double tau = 1.0;

    std::array<ExactRow, 4> alpha{};
    std::array<std::array<ExactRow, kRows>, 5> h_family{};  // H, H0, H1, H2, H3
    ForcingTemplate h_template{};
    ForcingTemplate h0_template{};
    std::array<QuadPair, 9> quad_pairs{};

    // Numeric images of the exact data.
    Eigen::MatrixXd A;      // 4 x 59
    Eigen::MatrixXd A1;     // 4 x 55
    Eigen::MatrixXd A_eta;  // 59 x 55
    std::array<Eigen::MatrixXd, 5> H;  // 16 x 55 each; H[0] = H, H[1+k] = H_k for k = 0..3

    Eigen::VectorXd alpha_vec(int k) const;  // k = 1..4
    Eigen::VectorXd X0(const Vec3& F) const;
    Eigen::VectorXd h(const Vec3& F) const;
    Eigen::VectorXd h0(const Vec3& F) const;
};

ConstantTableau build_tableau(double mu, double tau);

struct TableauReport {
    bool A_Aeta_zero = false;
    double A_Aeta_max_abs = 0.0;
    bool A_eta_full_rank = false;
    int A_eta_rank = 0;
    bool AX0_matches_beta = false;
    bool alpha_rows_match = false;
    bool h_family_rows_match = false;
    std::vector<std::string> mismatches;

    bool all_pass() const {
        return A_Aeta_zero && A_eta_full_rank && AX0_matches_beta && alpha_rows_match &&
               h_family_rows_match;
    }
};

TableauReport verify_tableau(const ConstantTableau& t, unsigned long long seed = 1);

// The printed row listings as tokens ("-a2", "e21"), used as the independent reference.
const std::array<std::array<const char*, kRows>, 5>& h_family_listing();

// r_j = z[target] - z[left] * (right . z), in constraint order.
std::array<double, 9> quadratic_residual(const ConstantTableau& t, const std::array<double, kZ>& z);

// Finite-difference residuals of the time (16) and space (48) first-order equations.
std::vector<GridData> linear_system_residual(const ConstantTableau& t, const std::vector<GridData>& Z,
                                             const std::array<GridData, 3>& F);

// True iff rank([A | beta]) == rank(A) for every sample.
bool solvability_check(const Eigen::MatrixXd& A, const std::vector<Eigen::VectorXd>& beta_samples,
                       double rel_tol = 1e-10);

// Structured text with exact entries for golden-file comparison.
std::string dump_tableau(const ConstantTableau& t);

}  // namespace nsfp
