#include "nsfp/tableau.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "nsfp/errors.hpp"
#include "nsfp/finite_diff.hpp"
#include "nsfp/linalg.hpp"

namespace nsfp {

Coef& Coef::operator+=(const Coef& o) {
    one += o.one;
    mu += o.mu;
    tau += o.tau;
    return *this;
}

std::string Coef::str() const {
    std::string s;
    auto term = [&s](int c, const char* sym) {
        if (c == 0) return;
        if (!s.empty()) s += c > 0 ? "+" : "-";
        else if (c < 0) s += "-";
        const int a = std::abs(c);
        if (*sym == '\0') s += std::to_string(a);
        else if (a == 1) s += sym;
        else s += std::to_string(a) + "*" + sym;
    };
    term(one, "");
    term(mu, "mu");
    term(tau, "tau");
    return s.empty() ? "0" : s;
}

namespace {

const char* base_name(Base b) {
    switch (b) {
        case Base::U1: return "u1";
        case Base::U2: return "u2";
        case Base::U3: return "u3";
        case Base::P: return "p";
        default: return "prod";
    }
}

std::string monomial_name(Base b, int nt, const MultiIndex& beta) {
    if (nt == 0 && order(beta) == 0) return base_name(b);
    std::string s = "d";
    for (int i = 0; i < nt; ++i) s += "t";
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < beta[a]; ++i) s += std::to_string(a + 1);
    return s + " " + base_name(b);
}

std::array<Component, kZ> make_dictionary() {
    std::array<Component, kZ> d;
    int i = 0;
    auto put = [&](Base b, int nt, MultiIndex beta) {
        d[i].base = b;
        d[i].time_order = nt;
        d[i].beta = beta;
        d[i].name = monomial_name(b, nt, beta);
        ++i;
    };
    // First derivatives and values; d1 u1 is eliminated through incompressibility.
    put(Base::U1, 0, {0, 1, 0});
    put(Base::U1, 0, {0, 0, 1});
    put(Base::U1, 0, {0, 0, 0});
    for (Base b : {Base::U2, Base::U3}) {
        put(b, 0, {1, 0, 0});
        put(b, 0, {0, 1, 0});
        put(b, 0, {0, 0, 1});
        put(b, 0, {0, 0, 0});
    }
    put(Base::P, 1, {0, 0, 0});
    put(Base::P, 0, {1, 0, 0});
    put(Base::P, 0, {0, 1, 0});
    put(Base::P, 0, {0, 0, 1});
    put(Base::P, 0, {0, 0, 0});
    for (Base b : {Base::U1, Base::U2, Base::U3}) {
        put(b, 2, {0, 0, 0});
        put(b, 0, {2, 0, 0});
        put(b, 0, {0, 2, 0});
        put(b, 0, {0, 0, 2});
        put(b, 1, {1, 0, 0});
        put(b, 1, {0, 1, 0});
        put(b, 1, {0, 0, 1});
        put(b, 0, {1, 1, 0});
        put(b, 0, {1, 0, 1});
        put(b, 0, {0, 1, 1});
    }
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) {
            d[i].base = Base::Product;
            d[i].prod_k = k;
            d[i].prod_j = j;
            d[i].name = fmt::format("u{} d{} u{}", k, k, j);
            ++i;
        }
    return d;
}

const std::array<Component, kZ>& dictionary() {
    static const std::array<Component, kZ> d = make_dictionary();
    return d;
}

Base velocity(int j) { return static_cast<Base>(j - 1); }

ExactRow unit(int i) {
    ExactRow r{};
    r[i - 1] = {1, 0, 0};
    return r;
}

ExactRow negate(ExactRow r) {
    for (auto& c : r) c = -c;
    return r;
}

// Exact alpha_k built from the meaning of the dictionary entries.
ExactRow make_alpha(int k) {
    ExactRow r{};
    if (k == 1) {
        // d1 u1 = -(d2 u2 + d3 u3)
        r[component_index(Base::U2, 0, {0, 1, 0}) - 1] += Coef{1, 0, 0};
        r[component_index(Base::U3, 0, {0, 0, 1}) - 1] += Coef{1, 0, 0};
        return r;
    }
    // tau dj p - mu lap uj + sum_k uk dk uj = Fj - dt uj
    const int j = k - 1;
    MultiIndex dj{0, 0, 0};
    dj[j - 1] = 1;
    r[component_index(Base::P, 0, dj) - 1] += Coef{0, 0, 1};
    for (int a = 0; a < 3; ++a) {
        MultiIndex two{0, 0, 0};
        two[a] = 2;
        r[component_index(velocity(j), 0, two) - 1] += Coef{0, -1, 0};
    }
    for (int kk = 1; kk <= 3; ++kk) r[product_index(kk, j) - 1] += Coef{1, 0, 0};
    return r;
}

struct Expressed {
    ExactRow row{};
    int forcing = 0;
};

// Linear expression in Z (plus forcing) of a derivative monomial of u_j or p.
Expressed express(Base b, int nt, const MultiIndex& beta) {
    Expressed e;
    if (const int idx = component_index(b, nt, beta)) {
        e.row = unit(idx);
        return e;
    }
    if (b == Base::U1 && nt == 0 && beta == MultiIndex{1, 0, 0}) {
        e.row = negate(make_alpha(1));
        return e;
    }
    if (b != Base::P && nt == 1 && order(beta) == 0) {
        const int j = static_cast<int>(b) + 1;
        e.row = negate(make_alpha(j + 1));
        e.forcing = j;
        return e;
    }
    throw ParameterError("ns_tableau", "monomial has no Z expression: " + monomial_name(b, nt, beta));
}

struct Quantity {
    Base b;
    int nt;
    MultiIndex beta;
};

// The sixteen quantities whose Z expressions form the rows of H.
const std::array<Quantity, kRows>& h_quantities() {
    static const std::array<Quantity, kRows> q{{
        {Base::U1, 0, {1, 0, 0}}, {Base::U1, 1, {0, 0, 0}}, {Base::U2, 1, {0, 0, 0}},
        {Base::U3, 1, {0, 0, 0}}, {Base::U1, 0, {0, 1, 0}}, {Base::U1, 0, {0, 0, 1}},
        {Base::U1, 0, {0, 0, 0}}, {Base::U2, 0, {1, 0, 0}}, {Base::U2, 0, {0, 1, 0}},
        {Base::U2, 0, {0, 0, 1}}, {Base::U2, 0, {0, 0, 0}}, {Base::U3, 0, {1, 0, 0}},
        {Base::U3, 0, {0, 1, 0}}, {Base::U3, 0, {0, 0, 1}}, {Base::U3, 0, {0, 0, 0}},
        {Base::P, 0, {0, 0, 0}},
    }};
    return q;
}

Eigen::VectorXd numeric(const ExactRow& r, double mu, double tau) {
    Eigen::VectorXd v(kZ);
    for (int i = 0; i < kZ; ++i) v(i) = r[i].value(mu, tau);
    return v;
}

// Parses a listing token: "e21", "-e3", "a2", "-a1".
ExactRow parse_token(const std::string& tok) {
    bool neg = false;
    std::size_t p = 0;
    if (tok[p] == '-') {
        neg = true;
        ++p;
    }
    const char kind = tok[p++];
    const int n = std::stoi(tok.substr(p));
    ExactRow r{};
    if (kind == 'e') r = unit(n);
    else if (kind == 'a') {
        // Reference alpha listing, independent of make_alpha.
        auto set = [&r](int i, Coef c) { r[i - 1] = c; };
        switch (n) {
            case 1: set(5, {1, 0, 0}); set(10, {1, 0, 0}); break;
            case 2: set(13, {0, 0, 1}); for (int i : {18, 19, 20}) set(i, {0, -1, 0}); for (int i : {47, 48, 49}) set(i, {1, 0, 0}); break;
            case 3: set(14, {0, 0, 1}); for (int i : {28, 29, 30}) set(i, {0, -1, 0}); for (int i : {50, 51, 52}) set(i, {1, 0, 0}); break;
            case 4: set(15, {0, 0, 1}); for (int i : {38, 39, 40}) set(i, {0, -1, 0}); for (int i : {53, 54, 55}) set(i, {1, 0, 0}); break;
            default: throw ParameterError("ns_tableau", "bad alpha token " + tok);
        }
    } else {
        throw ParameterError("ns_tableau", "bad listing token " + tok);
    }
    return neg ? negate(r) : r;
}

}  // namespace

const Component& component(int i) {
    if (i < 1 || i > kZ) throw ParameterError("ns_tableau", "component index out of range");
    return dictionary()[i - 1];
}

int component_index(Base base, int time_order, const MultiIndex& beta) {
    const auto& d = dictionary();
    for (int i = 0; i < kZ; ++i)
        if (d[i].base == base && d[i].time_order == time_order && d[i].beta == beta) return i + 1;
    return 0;
}

int product_index(int k, int j) { return 47 + 3 * (j - 1) + (k - 1); }

const std::array<std::array<const char*, kRows>, 5>& h_family_listing() {
    static const std::array<std::array<const char*, kRows>, 5> l{{
        {"-a1", "-a2", "-a3", "-a4", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9", "e10", "e11", "e16"},
        {"e21", "e17", "e27", "e37", "e22", "e23", "-a2", "e31", "e32", "e33", "-a3", "e41", "e42", "e43", "-a4", "e12"},
        {"e18", "e21", "e31", "e41", "e24", "e25", "-a1", "e28", "e34", "e35", "e4", "e38", "e44", "e45", "e8", "e13"},
        {"e24", "e22", "e32", "e42", "e19", "e26", "e1", "e34", "e29", "e36", "e5", "e44", "e39", "e46", "e9", "e14"},
        {"e25", "e23", "e33", "e43", "e26", "e20", "e2", "e35", "e36", "e30", "e6", "e45", "e46", "e40", "e10", "e15"},
    }};
    return l;
}

Eigen::VectorXd ConstantTableau::alpha_vec(int k) const { return numeric(alpha[k - 1], mu, tau); }

Eigen::VectorXd ConstantTableau::X0(const Vec3& F) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(kX);
    x(1) = F[0];
    x(2) = F[1];
    x(3) = F[2];
    return x;
}

static Eigen::VectorXd fill_template(const ForcingTemplate& tpl, const Vec3& F) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(kRows);
    for (int i = 0; i < kRows; ++i)
        if (tpl[i]) v(i) = F[tpl[i] - 1];
    return v;
}

Eigen::VectorXd ConstantTableau::h(const Vec3& F) const { return fill_template(h_template, F); }
Eigen::VectorXd ConstantTableau::h0(const Vec3& F) const { return fill_template(h0_template, F); }

ConstantTableau build_tableau(double mu, double tau) {
    if (!(mu > 0)) throw ParameterError("ns_tableau", "mu must be positive");
    if (!(tau > 0)) throw ParameterError("ns_tableau", "tau must be positive");
    ConstantTableau t;
    t.mu = mu;
    t.tau = tau;
    for (int k = 1; k <= 4; ++k) t.alpha[k - 1] = make_alpha(k);

    // Row i of H is the Z expression of quantity i; H0 and H1..H3 express its t and x_k derivatives.
    const auto& q = h_quantities();
    for (int i = 0; i < kRows; ++i) {
        const Expressed e = express(q[i].b, q[i].nt, q[i].beta);
        t.h_family[0][i] = e.row;
        t.h_template[i] = e.forcing;
        const Expressed et = express(q[i].b, q[i].nt + 1, q[i].beta);
        t.h_family[1][i] = et.row;
        t.h0_template[i] = et.forcing;
        for (int k = 0; k < 3; ++k) {
            MultiIndex b = q[i].beta;
            b[k] += 1;
            const Expressed ek = express(q[i].b, q[i].nt, b);
            if (ek.forcing != 0)
                throw ParameterError("ns_tableau", "space equation picked up a forcing term");
            t.h_family[2 + k][i] = ek.row;
        }
    }

    const std::array<int, 3> vel_value{component_index(Base::U1, 0, {0, 0, 0}),
                                       component_index(Base::U2, 0, {0, 0, 0}),
                                       component_index(Base::U3, 0, {0, 0, 0})};
    int qi = 0;
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) {
            MultiIndex dk{0, 0, 0};
            dk[k - 1] = 1;
            QuadPair& p = t.quad_pairs[qi++];
            p.target = product_index(k, j);
            p.left = vel_value[k - 1];
            p.right = express(velocity(j), 0, dk).row;
        }

    t.A1 = Eigen::MatrixXd(4, kZ);
    for (int k = 0; k < 4; ++k) t.A1.row(k) = t.alpha_vec(k + 1).transpose();
    t.A = Eigen::MatrixXd::Zero(4, kX);
    t.A.leftCols(4) = Eigen::MatrixXd::Identity(4, 4);
    t.A.rightCols(kZ) = t.A1;
    t.A_eta = Eigen::MatrixXd::Zero(kX, kZ);
    t.A_eta.topRows(4) = -t.A1;
    t.A_eta.bottomRows(kZ) = Eigen::MatrixXd::Identity(kZ, kZ);
    for (int f = 0; f < 5; ++f) {
        t.H[f] = Eigen::MatrixXd(kRows, kZ);
        for (int i = 0; i < kRows; ++i) t.H[f].row(i) = numeric(t.h_family[f][i], mu, tau).transpose();
    }
    return t;
}

TableauReport verify_tableau(const ConstantTableau& t, unsigned long long seed) {
    TableauReport r;
    const Eigen::MatrixXd prod = t.A * t.A_eta;
    r.A_Aeta_max_abs = prod.cwiseAbs().maxCoeff();
    r.A_Aeta_zero = r.A_Aeta_max_abs == 0.0;
    r.A_eta_rank = numeric_rank(t.A_eta, 1e-12);
    r.A_eta_full_rank = r.A_eta_rank == kZ;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    r.AX0_matches_beta = true;
    for (int s = 0; s < 3; ++s) {
        const Vec3 F{U(rng), U(rng), U(rng)};
        Eigen::VectorXd beta(4);
        beta << 0.0, F[0], F[1], F[2];
        Eigen::VectorXd z(kZ);
        for (int i = 0; i < kZ; ++i) z(i) = U(rng);
        const Eigen::VectorXd x = t.X0(F) + t.A_eta * z;
        if ((t.A * t.X0(F) - beta).cwiseAbs().maxCoeff() != 0.0 ||
            (t.A * x - beta).cwiseAbs().maxCoeff() > 1e-13)
            r.AX0_matches_beta = false;
    }

    r.alpha_rows_match = true;
    for (int k = 1; k <= 4; ++k) {
        const Eigen::VectorXd ref = numeric(parse_token("a" + std::to_string(k)), t.mu, t.tau);
        if (ref != t.A1.row(k - 1).transpose()) {
            r.alpha_rows_match = false;
            r.mismatches.push_back(fmt::format("alpha{}", k));
        }
    }

    static const char* names[5] = {"H", "H0", "H1", "H2", "H3"};
    r.h_family_rows_match = true;
    const auto& listing = h_family_listing();
    for (int f = 0; f < 5; ++f)
        for (int i = 0; i < kRows; ++i) {
            const Eigen::VectorXd ref = numeric(parse_token(listing[f][i]), t.mu, t.tau);
            if (ref != t.H[f].row(i).transpose()) {
                r.h_family_rows_match = false;
                r.mismatches.push_back(fmt::format("{} row {} (expected {})", names[f], i + 1, listing[f][i]));
            }
        }
    return r;
}

std::array<double, 9> quadratic_residual(const ConstantTableau& t, const std::array<double, kZ>& z) {
    std::array<double, 9> r{};
    for (int q = 0; q < 9; ++q) {
        const QuadPair& p = t.quad_pairs[q];
        double right = 0.0;
        for (int i = 0; i < kZ; ++i)
            if (!p.right[i].is_zero()) right += p.right[i].value(t.mu, t.tau) * z[i];
        r[q] = z[p.target - 1] - z[p.left - 1] * right;
    }
    return r;
}

std::vector<GridData> linear_system_residual(const ConstantTableau& t, const std::vector<GridData>& Z,
                                             const std::array<GridData, 3>& F) {
    if (Z.size() != static_cast<std::size_t>(kZ))
        throw ParameterError("ns_tableau", "Z must have 55 component fields");
    const Grid& g = Z.front().grid;
    for (int a = 0; a < 4; ++a)
        if (g.n[a] < 3) throw GridError("ns_tableau", "need at least 3 points on every differentiated axis");
    for (const auto& z : Z)
        if (!z.grid.same_as(g)) throw GridError("ns_tableau", "Z fields on different grids");
    for (const auto& f : F)
        if (!f.grid.same_as(g)) throw GridError("ns_tableau", "forcing on a different grid");

    auto combine = [&](const Eigen::MatrixXd& M, int row) {
        GridData out(g);
        for (int i = 0; i < kZ; ++i) {
            const double c = M(row, i);
            if (c == 0.0) continue;
            for (std::size_t p = 0; p < out.v.size(); ++p) out.v[p] += c * Z[i].v[p];
        }
        return out;
    };

    std::vector<GridData> res;
    res.reserve(64);
    for (int i = 0; i < kRows; ++i) {
        GridData q = combine(t.H[0], i);
        if (t.h_template[i]) q += F[t.h_template[i] - 1];
        GridData r = fd_derivative(q, 0, 1) - combine(t.H[1], i);
        if (t.h0_template[i]) r -= F[t.h0_template[i] - 1];
        res.push_back(std::move(r));
    }
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < kRows; ++i) {
            GridData q = combine(t.H[0], i);
            if (t.h_template[i]) q += F[t.h_template[i] - 1];
            res.push_back(fd_derivative(q, k + 1, 1) - combine(t.H[2 + k], i));
        }
    return res;
}

bool solvability_check(const Eigen::MatrixXd& A, const std::vector<Eigen::VectorXd>& beta_samples,
                       double rel_tol) {
    if (beta_samples.empty()) throw ParameterError("ns_tableau", "no beta samples");
    const int rA = numeric_rank(A, rel_tol);
    for (const auto& b : beta_samples) {
        if (b.size() != A.rows()) throw ParameterError("ns_tableau", "beta sample has wrong length");
        Eigen::MatrixXd aug(A.rows(), A.cols() + 1);
        aug << A, b;
        if (numeric_rank(aug, rel_tol) != rA) return false;
    }
    return true;
}

std::string dump_tableau(const ConstantTableau& t) {
    std::ostringstream os;
    os << "# constant tableau, exact entries in terms of mu and tau\n";
    os << fmt::format("mu = {:.17g}\ntau = {:.17g}\n\n", t.mu, t.tau);
    os << "[components]\n";
    for (int i = 1; i <= kZ; ++i) os << fmt::format("z{} = {}\n", i, component(i).name);
    os << "# slots 47..55 follow the order of the nine product constraints\n\n";
    auto row_str = [](const ExactRow& r) {
        std::string s;
        for (int i = 0; i < kZ; ++i)
            if (!r[i].is_zero()) s += fmt::format("{}{}:{}", s.empty() ? "" : " ", i + 1, r[i].str());
        return s.empty() ? std::string("0") : s;
    };
    os << "[alpha]\n";
    for (int k = 0; k < 4; ++k) os << fmt::format("alpha{} = {}\n", k + 1, row_str(t.alpha[k]));
    static const char* names[5] = {"H", "H0", "H1", "H2", "H3"};
    for (int f = 0; f < 5; ++f) {
        os << fmt::format("\n[{}]\n", names[f]);
        for (int i = 0; i < kRows; ++i)
            os << fmt::format("{}[{}] = {}\n", names[f], i + 1, row_str(t.h_family[f][i]));
    }
    auto tpl_str = [](const ForcingTemplate& tpl) {
        std::string s;
        for (int i = 0; i < kRows; ++i) s += fmt::format("{}{}", i ? " " : "", tpl[i] ? fmt::format("F{}", tpl[i]) : "0");
        return s;
    };
    os << "\n[templates]\nh = " << tpl_str(t.h_template) << "\nh0 = " << tpl_str(t.h0_template) << "\n";
    os << "\n[products]\n";
    for (const auto& p : t.quad_pairs)
        os << fmt::format("z{} = z{} * ({})\n", p.target, p.left, row_str(p.right));
    return os.str();
}

}  // namespace nsfp
