#include "nsfp/fixed_point.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "nsfp/errors.hpp"
#include "nsfp/finite_diff.hpp"

namespace nsfp {

namespace {

constexpr int kLeft[3] = {7, 11, 15};
constexpr int kRight[9] = {1, 5, 6, 8, 9, 10, 12, 13, 14};

MultiIndex unit_sum(std::initializer_list<int> axes) {
    MultiIndex b{0, 0, 0};
    for (int a : axes) ++b[a];
    return b;
}

std::vector<char> domain_mask(const Grid& g, const Domain& K) {
    std::vector<char> mask(g.spatial_size());
    std::size_t idx = 0;
    for (int i = 0; i < g.n[1]; ++i)
        for (int j = 0; j < g.n[2]; ++j)
            for (int k = 0; k < g.n[3]; ++k) mask[idx++] = K.contains(g.node(i, j, k)) ? 1 : 0;
    return mask;
}

WTable zero_table(const Grid& g, bool verification_rows) {
    WTable t;
    for (int i = 1; i <= 16; ++i) t.w[i] = GridData(g);
    t.verification_rows = verification_rows;
    return t;
}

bool all_zero(const NineField& f) {
    for (const auto& c : f)
        for (double v : c.v)
            if (v != 0.0) return false;
    return true;
}

}  // namespace

NineField zero_nine(const Grid& g) {
    NineField f;
    for (auto& c : f) c = GridData(g);
    return f;
}

double sup_norm(const NineField& f) {
    double s = 0.0;
    for (const auto& c : f) s = std::max(s, c.sup_norm());
    return s;
}

double sup_distance(const NineField& a, const NineField& b) {
    double s = 0.0;
    for (int i = 0; i < 9; ++i) s = std::max(s, sup_distance(a[i], b[i]));
    return s;
}

WTable& WTable::operator*=(double s) {
    for (int i = 1; i <= 16; ++i)
        if (!w[i].v.empty()) w[i] *= s;
    return *this;
}

WTable potential_table(const std::array<CellField, 3>& densities, const EngineSettings& s) {
    const Grid& g = densities[0].grid;
    const auto pot = newtonian_potential_grid({&densities[0], &densities[1], &densities[2]},
                                              {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    GridData div_v = pot[1][0] + pot[2][1] + pot[3][2];

    const std::vector<MultiIndex> betas = multi_indices(2, 3);
    std::array<std::map<MultiIndex, GridData>, 3> d;
    for (int m = 0; m < 3; ++m) {
        auto lifted = heat_propagate_grid(pot[0][m], s.mu, betas, s.quad);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            lifted[b] *= kHeatSourceSign;
            d[m].emplace(betas[b], std::move(lifted[b]));
        }
    }
    auto D = [&](int m, std::initializer_list<int> axes) -> const GridData& { return d[m].at(unit_sum(axes)); };

    std::array<GridData, 3> U;
    std::array<std::array<GridData, 3>, 3> dU;
    for (int m = 0; m < 3; ++m) {
        U[m] = GridData(g);
        for (int n = 0; n < 3; ++n) {
            U[m] += D(n, {m, n});
            U[m] -= D(m, {n, n});
        }
        for (int a = 0; a < 3; ++a) {
            dU[m][a] = GridData(g);
            for (int n = 0; n < 3; ++n) {
                dU[m][a] += D(n, {m, n, a});
                dU[m][a] -= D(m, {n, n, a});
            }
        }
    }

    WTable t;
    t.w[1] = -1.0 * (dU[1][1] + dU[2][2]);
    t.w[5] = dU[0][1];
    t.w[6] = dU[0][2];
    t.w[7] = U[0];
    for (int a = 0; a < 3; ++a) {
        t.w[8 + a] = dU[1][a];
        t.w[12 + a] = dU[2][a];
    }
    t.w[11] = U[1];
    t.w[15] = U[2];
    t.w[16] = (1.0 / s.tau) * div_v;
    t.verification_rows = s.verification_rows;
    if (s.verification_rows) {
        for (int j = 0; j < 3; ++j)
            t.w[2 + j] = -1.0 * (s.tau * fd_derivative(t.w[16], j + 1, 1) - s.mu * fd_laplacian(U[j]));
    }
    return t;
}

WTable forcing_potentials(const VectorField& F, const Domain& K, const Grid& g, const EngineSettings& s,
                          bool check_outer_support) {
    K.validate("fixed_point_engine");
    if (check_outer_support) check_support(F, K, g);
    std::array<CellField, 3> dens{cell_sample(F[0], g), cell_sample(F[1], g), cell_sample(F[2], g)};
    return potential_table(dens, s);
}

NineField lift_h2(const NineField& h1, const EngineSettings& s) {
    NineField out;
    for (int j = 0; j < 9; ++j) {
        const CellField c = cell_average(h1[j]);
        const auto pot = newtonian_potential_grid({&c}, {{0, 0, 0}});
        out[j] = kHeatSourceSign * heat_propagate_grid(pot[0][0], s.mu, {{0, 0, 0}}, s.quad)[0];
    }
    return out;
}

WTable response_table(const NineField& h1, const EngineSettings& s) {
    const Grid& g = h1[0].grid;
    if (all_zero(h1)) return zero_table(g, s.verification_rows);
    std::array<CellField, 3> dens{CellField(g), CellField(g), CellField(g)};
    for (int m = 0; m < 3; ++m) {
        GridData sum = h1[3 * m] + h1[3 * m + 1];
        sum += h1[3 * m + 2];
        dens[m] = cell_average(sum);
    }
    WTable t = potential_table(dens, s);
    t *= -1.0;
    return t;
}

NineField combine_g(const WTable* w1, const WTable& w2, const Domain& K) {
    const Grid& g = w2[7].grid;
    const auto mask = domain_mask(g, K);
    NineField out;
    for (int n = 0; n < 9; ++n) {
        GridData L = w2[kLeft[n % 3]];
        GridData R = w2[kRight[n]];
        if (w1) {
            L += (*w1)[kLeft[n % 3]];
            R += (*w1)[kRight[n]];
        }
        out[n] = hadamard(L, R);
        for (int m = 0; m < g.n[0]; ++m) {
            double* sl = out[n].slice(m);
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (!mask[i]) sl[i] = 0.0;
        }
    }
    return out;
}

NineField apply_g(const NineField& h1, const WTable* w1, const Domain& K, const EngineSettings& s) {
    return combine_g(w1, response_table(h1, s), K);
}

void HolderBudget::validate() const {
    if (!(M > 0)) throw ParameterError("fixed_point_engine", "budget M must be positive");
    if (!(C1 >= 0)) throw ParameterError("fixed_point_engine", "budget C1 must be non-negative");
    if (!(C >= 2 * C1) || !(C > 0)) throw ParameterError("fixed_point_engine", "budget needs C >= 2 C1 and C > 0");
    if (!(alpha > 0 && alpha < 1)) throw ParameterError("fixed_point_engine", "alpha must lie in (0, 1)");
}

namespace {

struct NodePair {
    std::array<int, 4> a, b;
};

std::vector<NodePair> node_pairs(const Grid& g, int pairs, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<NodePair> out;
    auto uniform = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    for (int p = 0; p < pairs; ++p) {
        NodePair np;
        for (int a = 0; a < 4; ++a) np.a[a] = uniform(g.n[a]);
        if (p % 2 == 0) {
            for (int a = 0; a < 4; ++a) np.b[a] = uniform(g.n[a]);
        } else {
            std::uniform_int_distribution<int> off(-2, 2);
            for (int a = 0; a < 4; ++a) np.b[a] = std::clamp(np.a[a] + off(rng), 0, g.n[a] - 1);
        }
        if (np.a != np.b) out.push_back(np);
    }
    return out;
}

double pair_distance(const Grid& g, const NodePair& p) {
    double d2 = std::pow((p.a[0] - p.b[0]) * g.dt(), 2);
    for (int a = 0; a < 3; ++a) d2 += std::pow((p.a[a + 1] - p.b[a + 1]) * g.h(a), 2);
    return std::sqrt(d2);
}

}  // namespace

HolderEstimate holder_estimate(const NineField& f, double alpha, int pairs, unsigned long long seed) {
    HolderEstimate e;
    const Grid& g = f[0].grid;
    const auto ps = node_pairs(g, pairs, seed);
    for (const auto& c : f) {
        e.sup = std::max(e.sup, c.sup_norm());
        for (const auto& p : ps) {
            const double diff = std::abs(c.at(p.a[0], p.a[1], p.a[2], p.a[3]) - c.at(p.b[0], p.b[1], p.b[2], p.b[3]));
            const double r = diff / std::pow(pair_distance(g, p), alpha);
            if (!std::isfinite(r)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
            e.constant = std::max(e.constant, r);
        }
    }
    return e;
}

HolderEstimate holder_estimate(const GridData& f, double alpha, int pairs, unsigned long long seed) {
    NineField n;
    for (auto& c : n) c = f;
    return holder_estimate(n, alpha, pairs, seed);
}

HolderEstimate holder_estimate(const ScalarField& f, const Domain& support, double alpha, int pairs,
                               unsigned long long seed) {
    std::mt19937_64 rng(seed);
    const Box bb = support.bounding_box();
    const double scale = std::hypot(support.T, bb.diameter());
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto random_point = [&]() {
        std::array<double, 4> p{support.T * u01(rng), 0, 0, 0};
        for (int a = 0; a < 3; ++a) p[a + 1] = bb.lo[a] + bb.extent(a) * u01(rng);
        return p;
    };
    HolderEstimate e;
    for (int i = 0; i < pairs; ++i) {
        auto a = random_point();
        auto b = random_point();
        if (i % 2 == 1) {
            const double r = scale * std::pow(10.0, -4.0 * u01(rng));
            for (int k = 0; k < 4; ++k) b[k] = a[k] + r * (u01(rng) - 0.5);
            b[0] = std::clamp(b[0], 0.0, support.T);
            for (int k = 0; k < 3; ++k) b[k + 1] = std::clamp(b[k + 1], bb.lo[k], bb.hi[k]);
        }
        double d2 = 0.0;
        for (int k = 0; k < 4; ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
        if (d2 == 0.0) continue;
        const double fa = f(a[0], {a[1], a[2], a[3]}), fb = f(b[0], {b[1], b[2], b[3]});
        e.sup = std::max({e.sup, std::abs(fa), std::abs(fb)});
        e.constant = std::max(e.constant, std::abs(fa - fb) / std::pow(std::sqrt(d2), alpha));
    }
    return e;
}

SmallnessReport smallness_check(const BoundConstants& b, const HolderBudget& budget) {
    budget.validate();
    SmallnessReport r;
    const double M = budget.M, C = budget.C, C1 = budget.C1, MK = b.M_K1;
    r.x = b.M_T3 * MK;
    const double x = r.x;
    r.lhs_M = M / 2 + M * x + x * x;
    r.rhs_M = M;
    r.lhs_C = C1 + 2 * ((M / 2) * b.M_T4 * MK + C1 * x + x * b.M_T4 * MK);
    r.rhs_C = C;
    r.lhs_contraction = (M / 2 + x) * 2 * x / M;
    r.pass_self_map = r.lhs_M <= r.rhs_M && r.lhs_C <= r.rhs_C;
    r.pass_contraction = r.lhs_contraction < 1.0;
    r.margin_self_map = std::min(r.rhs_M - r.lhs_M, r.rhs_C - r.lhs_C);
    r.margin_contraction = 1.0 - r.lhs_contraction;
    return r;
}

std::string to_string(PicardStatus s) {
    switch (s) {
        case PicardStatus::Converged: return "converged";
        case PicardStatus::MaxIterations: return "max_iterations";
        case PicardStatus::Diverged: return "diverged";
        case PicardStatus::BudgetViolated: return "budget_violated";
    }
    return "unknown";
}

std::vector<double> PicardResult::ratios() const {
    std::vector<double> r;
    for (std::size_t i = 1; i < trace.size(); ++i)
        r.push_back(trace[i - 1].delta > 0 ? trace[i].delta / trace[i - 1].delta : 0.0);
    return r;
}

PicardResult picard(const WTable& w1, const Domain& K, const Grid& g, const EngineSettings& s,
                    const HolderBudget& budget, const PicardOptions& opt) {
    if (opt.max_iter < 1) throw ParameterError("fixed_point_engine", "max_iter must be at least 1");
    if (!(opt.tol > 0)) throw ParameterError("fixed_point_engine", "picard tolerance must be positive");
    const auto start = std::chrono::steady_clock::now();
    PicardResult res;
    res.h = zero_nine(g);
    res.status = PicardStatus::MaxIterations;
    int growing = 0;
    for (int n = 1; n <= opt.max_iter; ++n) {
        WTable w2 = response_table(res.h, s);
        NineField next = combine_g(&w1, w2, K);
        TraceRow row;
        row.iteration = n;
        row.delta = sup_distance(next, res.h);
        row.sup = sup_norm(next);
        row.holder = holder_estimate(next, budget.alpha, opt.holder_pairs, opt.seed).constant;
        row.in_omega_c = row.sup <= budget.M && row.holder <= budget.C;
        row.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double prev = res.trace.empty() ? 0.0 : res.trace.back().delta;
        res.trace.push_back(row);
        res.h = std::move(next);
        res.w2 = std::move(w2);

        if (!std::isfinite(row.delta) || !std::isfinite(row.sup)) {
            res.status = PicardStatus::Diverged;
            break;
        }
        if (n >= 2 && row.delta > prev) {
            if (++growing >= 3) {
                res.status = PicardStatus::Diverged;
                break;
            }
        } else {
            growing = 0;
        }
        if (row.delta < opt.tol) {
            res.status = PicardStatus::Converged;
            break;
        }
        if (!row.in_omega_c && opt.stop_on_budget) {
            res.status = PicardStatus::BudgetViolated;
            break;
        }
    }
    return res;
}

NineField random_bounded_field(const Grid& g, const Domain& K, double M, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto mask = domain_mask(g, K);
    NineField f = zero_nine(g);
    for (auto& c : f) {
        double k[3][4], amp[3], ph[3][4];
        for (int mode = 0; mode < 3; ++mode) {
            amp[mode] = u(rng);
            for (int a = 0; a < 4; ++a) {
                k[mode][a] = M_PI * (1.0 + 1.5 * (u(rng) + 1.0));
                ph[mode][a] = M_PI * u(rng);
            }
        }
        for (int m = 0; m < g.n[0]; ++m)
            for (int i = 0; i < g.n[1]; ++i)
                for (int j = 0; j < g.n[2]; ++j)
                    for (int kk = 0; kk < g.n[3]; ++kk) {
                        const double s[4] = {g.t(m) / g.T, (g.x(0, i) - g.box.lo[0]) / g.box.extent(0),
                                             (g.x(1, j) - g.box.lo[1]) / g.box.extent(1),
                                             (g.x(2, kk) - g.box.lo[2]) / g.box.extent(2)};
                        double v = 0.0;
                        for (int mode = 0; mode < 3; ++mode) {
                            double p = amp[mode];
                            for (int a = 0; a < 4; ++a) p *= std::cos(k[mode][a] * s[a] + ph[mode][a]);
                            v += p;
                        }
                        c.at(m, i, j, kk) = v;
                    }
        for (int m = 0; m < g.n[0]; ++m) {
            double* sl = c.slice(m);
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (!mask[i]) sl[i] = 0.0;
        }
        const double peak = c.sup_norm();
        if (peak > 0) c *= M * (0.3 + 0.35 * (u(rng) + 1.0)) / peak;
    }
    return f;
}

double empirical_lipschitz(const WTable& w1, const Domain& K, const Grid& g, const EngineSettings& s, double M,
                           int pairs, unsigned long long seed) {
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const NineField a = random_bounded_field(g, K, M, seed + 2 * p);
        const NineField b = random_bounded_field(g, K, M, seed + 2 * p + 1);
        const double num = sup_distance(apply_g(a, &w1, K, s), apply_g(b, &w1, K, s));
        const double den = sup_distance(a, b);
        if (den > 0) worst = std::max(worst, num / den);
    }
    return worst;
}

}  // namespace nsfp
