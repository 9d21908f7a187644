#include "nsfp/driver.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>

#include "nsfp/bounds.hpp"
#include "nsfp/errors.hpp"
#include "nsfp/finite_diff.hpp"
#include "nsfp/heat.hpp"
#include "nsfp/newtonian.hpp"
#include "nsfp/partition.hpp"
#include "nsfp/validators.hpp"

namespace nsfp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Output {
public:
    explicit Output(const std::filesystem::path& dir) : dir_(dir) { std::filesystem::create_directories(dir_); }

    void write(const std::string& name, const std::string& text) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("solver_cli", "cannot write " + path.string());
        out << text;
        files.push_back(path);
    }

    std::vector<std::filesystem::path> files;

private:
    std::filesystem::path dir_;
};

std::string header(const std::string& title, const RunConfig& c) {
    return fmt::format("{}\n{}\n{}\n", title, std::string(title.size(), '='), describe(c));
}

Check bound_check(std::string name, double value, double threshold, std::string detail = {}) {
    return {std::move(name), value, threshold, value <= threshold, std::move(detail)};
}

Check range_check(std::string name, const std::vector<double>& values, double lo, double hi) {
    bool ok = !values.empty();
    std::string detail = "orders";
    double worst = values.empty() ? 0.0 : values.front();
    for (double v : values) {
        ok = ok && v >= lo && v <= hi;
        detail += fmt::format(" {:.4f}", v);
        if (std::abs(v - 0.5 * (lo + hi)) > std::abs(worst - 0.5 * (lo + hi))) worst = v;
    }
    return {std::move(name), worst, hi, ok, detail + fmt::format(" within [{}, {}]", lo, hi)};
}

std::vector<double> orders(const std::vector<double>& errors) {
    std::vector<double> out;
    for (std::size_t i = 1; i < errors.size(); ++i) out.push_back(observed_order(errors[i - 1], errors[i]));
    return out;
}

double rel(double value, double exact) { return std::abs(value - exact) / std::abs(exact); }

// ---------------------------------------------------------------- greens oracles

void potential_checks(const RunConfig& c, std::vector<Check>& out) {
    const double R = 0.5;
    const Domain ball = column_ball(R);
    const ScalarField one = ScalarField::analytic([](double, const Vec3&) { return 1.0; }, Support{ball});
    const std::vector<Vec3> pts{{0, 0, 0}, {0.9, 0, 0}, {1.0, 0.3, 0.2}};
    const auto v = newtonian_potential(one, 0.0, ball, pts, {0, 0, 0}, c.cells_per_axis);
    out.push_back(bound_check("uniform ball potential at the centre (-R^2/2), relative error", rel(v[0], -0.5 * R * R),
                              1e-3));
    double outside = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = std::sqrt(pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1] + pts[i][2] * pts[i][2]);
        outside = std::max(outside, rel(v[i], -R * R * R / (3.0 * d)));
    }
    out.push_back(bound_check("uniform ball potential outside (-R^3/(3d)), relative error", outside, 1e-3));

    // Five-point Laplacian of the potential at a point away from the density.
    const Domain K = Domain{{Box{{-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3}}}, 1.0};
    const ScalarField bump = ScalarField::analytic(
        [](double, const Vec3& x) {
            const double s = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 0.09;
            return s < 1.0 ? std::pow(1.0 - s, 4) : 0.0;
        },
        Support{K});
    const Vec3 p{1.0, 0.4, -0.2};
    std::vector<double> lap;
    double d = 0.2;
    for (int level = 0; level < c.refinement_levels; ++level, d *= 0.5) {
        std::vector<Vec3> q{p};
        for (int a = 0; a < 3; ++a)
            for (double s : {d, -d}) {
                Vec3 x = p;
                x[a] += s;
                q.push_back(x);
            }
        const auto w = newtonian_potential(bump, 0.0, K, q, {0, 0, 0}, 24);
        double l = -6.0 * w[0];
        for (int i = 1; i < 7; ++i) l += w[i];
        lap.push_back(std::abs(l) / (d * d));
    }
    out.push_back(range_check("potential harmonic away from the density, FD order", orders(lap), 1.7, 2.3));
}

void heat_checks(const RunConfig& c, std::vector<Check>& out) {
    const HeatQuadrature q(c.legendre_order, c.hermite_order);
    const Domain wide{{Box{{-6, -6, -6}, {6, 6, 6}}}, 1.0};
    const ScalarField constant = ScalarField::analytic([](double, const Vec3&) { return 1.7; }, Support{wide});
    double err = 0.0;
    for (double t : {0.0, 0.25, 1.0})
        for (const Vec3& x : {Vec3{0.3, -0.2, 0.5}, Vec3{-1.0, 2.0, 0.0}})
            err = std::max(err, std::abs(heat_propagate(constant, 0.1, t, x, {}, q) - 1.7 * t));
    out.push_back(bound_check("constant source propagates to c t, absolute error", err, 1e-10));

    // Kernel derivatives against central differences of propagated values.
    const ScalarField gauss = ScalarField::analytic(
        [](double s, const Vec3& x) {
            const double r2 = (x[0] - 0.1) * (x[0] - 0.1) + x[1] * x[1] + (x[2] + 0.1) * (x[2] + 0.1);
            return (1.0 + s) * std::exp(-r2 / 0.32);
        },
        Support{wide});
    const double mu = 0.1, t = 0.6;
    const Vec3 x{0.2, -0.1, 0.3};
    auto H = [&](Vec3 y) { return heat_propagate(gauss, mu, t, y, {}, q); };
    auto shift = [](Vec3 y, int a, double s) {
        y[a] += s;
        return y;
    };
    const std::vector<std::pair<MultiIndex, std::string>> cases{
        {{1, 0, 0}, "d/dx1"}, {{0, 2, 0}, "d2/dx2^2"}, {{1, 1, 0}, "d2/dx1dx2"}};
    for (const auto& [beta, label] : cases) {
        const double exact = heat_propagate(gauss, mu, t, x, {0, beta}, q);
        std::vector<double> errs;
        double d = 0.1;
        for (int level = 0; level < c.refinement_levels; ++level, d *= 0.5) {
            double fd;
            if (beta == MultiIndex{1, 0, 0})
                fd = (H(shift(x, 0, d)) - H(shift(x, 0, -d))) / (2 * d);
            else if (beta == MultiIndex{0, 2, 0})
                fd = (H(shift(x, 1, d)) - 2 * H(x) + H(shift(x, 1, -d))) / (d * d);
            else
                fd = (H(shift(shift(x, 0, d), 1, d)) - H(shift(shift(x, 0, d), 1, -d)) -
                      H(shift(shift(x, 0, -d), 1, d)) + H(shift(shift(x, 0, -d), 1, -d))) /
                     (4 * d * d);
            errs.push_back(std::abs(fd - exact));
        }
        out.push_back(range_check("heat kernel derivative " + label + " against differences, order", orders(errs),
                                  1.7, 2.3));
    }

    // Which source sign makes mu Lap h2 - dh2/dt - sign v vanish.
    const Box b{{-1, -1, -1}, {1, 1, 1}};
    const ScalarField v = ScalarField::analytic(
        [](double s, const Vec3& y) {
            const double r2 = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / 0.81;
            return r2 < 1.0 ? (1.0 + s) * std::pow(1.0 - r2, 4) : 0.0;
        },
        Support{Domain{{b}, 0.5}});
    std::vector<GridData> h2s, vs;
    for (int n : {9, 17}) {
        Grid g;
        g.box = b;
        g.T = 0.5;
        g.n = {n, n, n, n};
        const GridData vd = sample(v, g);
        h2s.push_back(heat_propagate_grid(vd, 0.1, {{0, 0, 0}}, HeatQuadrature(std::max(24, c.legendre_order),
                                                                                c.hermite_order))[0]);
        vs.push_back(vd);
    }
    const HeatSignReport sign = resolve_heat_sign(h2s, vs, 0.1);
    const std::vector<double>& win = sign.sign > 0 ? sign.plus_sup : sign.minus_sup;
    const std::vector<double>& lose = sign.sign > 0 ? sign.minus_sup : sign.plus_sup;
    Check sc;
    sc.name = "heat source sign resolved by residual decay";
    sc.value = sign.sign;
    sc.threshold = kHeatSourceSign;
    sc.pass = sign.sign == kHeatSourceSign && win.back() < win.front() && lose.back() > win.back();
    sc.detail = fmt::format("sign {:+.0f}; winning residual {:.4e} -> {:.4e} (order {:.3f}); other sign {:.4e} -> {:.4e}",
                            sign.sign, win.front(), win.back(), sign.observed_order, lose.front(), lose.back());
    out.push_back(sc);
}

void phi_checks(const RunConfig& c, std::vector<Check>& out) {
    double err = 0.0, zero = 0.0;
    for (double t : {0.5, 1.0, 2.0})
        for (double frac : {0.01, 0.3, 0.9}) {
            const double tau1 = t * (1.0 - frac);
            const auto closed = phi_functions(t, tau1);
            const auto quad = phi_quadrature(t, tau1);
            for (int i = 0; i < 2; ++i) err = std::max(err, rel(quad[i], closed[i]));
            for (int i = 2; i < 5; ++i) zero = std::max({zero, std::abs(closed[i]), std::abs(quad[i])});
        }
    out.push_back(bound_check("phi1, phi2 quadrature against closed forms, relative error", err, 1e-8));
    out.push_back(bound_check("phi3, phi4, phi5 vanish identically", zero, 0.0));
    const double near = phi_functions(1.0, 1.0 - 1e-8)[0], far = phi_functions(1.0, 0.0)[0];
    const BoundConstants bc = bound_constants(c.domain, c.mu, c.budget.alpha, c.budget.M, c.epsilon_trunc,
                                              CapacityReport{1.0, {0, 0, 0}, 0, 0.0});
    Check dc;
    dc.name = "phi1, phi2 divergence flagged as tau1 -> t";
    dc.value = near / far;
    dc.threshold = 1e7;
    dc.pass = bc.phi_divergent && near / far >= 1e7;
    dc.detail = fmt::format("phi1 growth {:.3e} over t - tau1 from 1 to 1e-8; flag {}", near / far,
                            bc.phi_divergent ? "raised" : "missing");
    out.push_back(dc);
}

void capacity_checks(const RunConfig& c, std::vector<Check>& out) {
    const Vec3 centre = c.domain.bounding_box().center();
    const double base = domain_capacity(c.domain, c.capacity_samples).value;
    for (double s : {0.5, 0.25}) {
        const double scaled = domain_capacity(c.domain.scaled(s, centre), c.capacity_samples).value;
        out.push_back(bound_check(fmt::format("capacity scaling M(sK)/M(K) = s^2 for s = {}", s),
                                  rel(scaled / base, s * s), 1e-3));
    }
    const double R = 0.5;
    out.push_back(bound_check("column ball capacity R^2/2, relative error",
                              rel(domain_capacity(column_ball(R), c.capacity_samples).value, 0.5 * R * R), 1e-3));
}

// ---------------------------------------------------------------- reports

std::string bounds_text(const BoundConstants& b, const SmallnessReport& s) {
    std::string o;
    auto line = [&](std::string_view k, double v) { o += fmt::format("  {:<30} {:.10e}\n", k, v); };
    o += "capacity M(K1)\n";
    line("value", b.M_K1);
    o += fmt::format("  {:<30} [{:.10f}, {:.10f}, {:.10f}]\n", "argmax", b.capacity.argmax[0], b.capacity.argmax[1],
                     b.capacity.argmax[2]);
    o += fmt::format("  {:<30} {}\n", "lattice samples per axis", b.capacity.samples_per_axis);
    o += "envelope constants\n";
    line("M_T1", b.M_T1);
    line("M_T2", b.M_T2);
    line("M_T3", b.M_T3);
    line("M_T4", b.M_T4);
    line("M'", b.Mp);
    line("M''", b.Mpp);
    line("M'''", b.Mppp);
    line("phi1 max", b.phi1_max);
    line("phi2 max", b.phi2_max);
    line("epsilon_trunc", b.epsilon_trunc);
    line("space-time diameter", b.spacetime_diameter);
    o += fmt::format("  {:<30} {}\n", "truncated envelopes", b.truncated ? "yes" : "no");
    o += fmt::format("  {:<30} {}\n", "phi1, phi2 divergent", b.phi_divergent ? "yes" : "no");
    o += "smallness conditions\n";
    line("x = M_T3 M(K1)", s.x);
    o += fmt::format("  {:<30} {:.10e} <= {:.10e}  {}\n", "self-map (sup bound)", s.lhs_M, s.rhs_M,
                     s.lhs_M <= s.rhs_M ? "holds" : "fails");
    o += fmt::format("  {:<30} {:.10e} <= {:.10e}  {}\n", "self-map (Holder bound)", s.lhs_C, s.rhs_C,
                     s.lhs_C <= s.rhs_C ? "holds" : "fails");
    o += fmt::format("  {:<30} {:.10e} <  1  {}\n", "contraction", s.lhs_contraction,
                     s.pass_contraction ? "holds" : "fails");
    o += fmt::format("  {:<30} {}\n", "verdict", s.pass() ? "pass" : "fail");
    return o;
}

std::string trace_csv(const PicardResult& r) {
    std::string o = "iteration,delta,sup,holder,in_omega_c\n";
    for (const auto& t : r.trace)
        o += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", t.iteration, t.delta, t.sup, t.holder, t.in_omega_c ? 1 : 0);
    return o;
}

std::string timing_csv(const PicardResult& r) {
    std::string o = "iteration,elapsed_seconds\n";
    for (const auto& t : r.trace) o += fmt::format("{},{:.6f}\n", t.iteration, t.elapsed);
    return o;
}

std::string residual_text(const NSResidual& r) {
    static const char* names[4] = {"divergence", "momentum x1", "momentum x2", "momentum x3"};
    std::string o;
    for (int c = 0; c < 4; ++c)
        o += fmt::format("    {:<12} sup {:.6e}  mean |r| {:.6e}  nodes {}\n", names[c], r.summary[c].sup,
                         r.summary[c].mean_abs, r.summary[c].count);
    return o;
}

std::string piece_text(const PieceSolve& p, const RunConfig& c) {
    std::string o;
    const auto& tr = p.picard.trace;
    o += fmt::format("  picard status          {}\n", to_string(p.picard.status));
    o += fmt::format("  iterations             {}\n", tr.size());
    if (!tr.empty()) {
        o += fmt::format("  final delta            {:.6e}\n", tr.back().delta);
        o += fmt::format("  final sup |h|          {:.6e}\n", tr.back().sup);
        o += fmt::format("  final Holder constant  {:.6e}\n", tr.back().holder);
        std::size_t out_count = 0;
        for (const auto& row : tr) out_count += row.in_omega_c ? 0 : 1;
        o += fmt::format("  iterates outside budget {}\n", out_count);
    }
    const auto q = p.picard.ratios();
    if (!q.empty()) {
        double worst = 0.0;
        for (double x : q) worst = std::max(worst, x);
        o += fmt::format("  max delta ratio        {:.6e} over {} ratios\n", worst, q.size());
    }
    o += "  Navier-Stokes residual of the reconstructed fields (diagnostic)\n";
    o += "   all interior nodes\n" + residual_text(p.residual);
    o += fmt::format("   nodes at least {} from the faces\n", c.margin_for(p.grid)) + residual_text(p.deep_residual);
    o += fmt::format("  face values sup |u1| {:.6e} |u2| {:.6e} |u3| {:.6e} |p| {:.6e}\n", p.face_sup[0],
                     p.face_sup[1], p.face_sup[2], p.face_sup[3]);
    return o;
}

std::string fields_csv(const PieceSolve& p) {
    const Grid& g = p.grid;
    std::string o = "t,x1,x2,x3,u1,u2,u3,p,r_div,r_mom1,r_mom2,r_mom3\n";
    o.reserve(g.size() * 160);
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < g.n[1]; ++i)
            for (int j = 0; j < g.n[2]; ++j)
                for (int k = 0; k < g.n[3]; ++k) {
                    o += fmt::format("{:.10e},{:.10e},{:.10e},{:.10e}", g.t(m), g.x(0, i), g.x(1, j), g.x(2, k));
                    for (int f = 0; f < 4; ++f) o += fmt::format(",{:.10e}", p.flow.f[f].at(m, i, j, k));
                    for (int f = 0; f < 4; ++f) o += fmt::format(",{:.10e}", p.residual.r[f].at(m, i, j, k));
                    o += '\n';
                }
    return o;
}

std::array<double, 4> face_sup(const FlowFields& f) {
    const Grid& g = f.grid;
    std::array<double, 4> s{};
    for (int m = 0; m < g.n[0]; ++m)
        for (int i = 0; i < g.n[1]; ++i)
            for (int j = 0; j < g.n[2]; ++j)
                for (int k = 0; k < g.n[3]; ++k) {
                    const bool face = i == 0 || j == 0 || k == 0 || i == g.n[1] - 1 || j == g.n[2] - 1 ||
                                      k == g.n[3] - 1;
                    if (!face) continue;
                    for (int c = 0; c < 4; ++c) s[c] = std::max(s[c], std::abs(f.f[c].at(m, i, j, k)));
                }
    return s;
}

int picard_exit(const PicardResult& r) { return r.status == PicardStatus::Converged ? kExitPass : kExitFail; }

// ---------------------------------------------------------------- subcommands

RunResult run_tableau(const RunConfig& c, Output& out) {
    const auto t0 = Clock::now();
    const ConstantTableau t = build_tableau(c.mu, c.tau);
    const TableauReport rep = verify_tableau(t, c.seed);
    std::string o = header("constant tableau of the first-order Navier-Stokes system", c);
    o += fmt::format("A A_eta = 0 exactly             {}  (max |entry| {:.3e})\n", rep.A_Aeta_zero ? "PASS" : "FAIL",
                     rep.A_Aeta_max_abs);
    o += fmt::format("rank A_eta = 55                 {}  (rank {})\n", rep.A_eta_full_rank ? "PASS" : "FAIL",
                     rep.A_eta_rank);
    o += fmt::format("A X0 reproduces beta            {}\n", rep.AX0_matches_beta ? "PASS" : "FAIL");
    o += fmt::format("alpha rows match dictionary     {}\n", rep.alpha_rows_match ? "PASS" : "FAIL");
    o += fmt::format("H-family rows match listings    {}\n", rep.h_family_rows_match ? "PASS" : "FAIL");
    for (const auto& m : rep.mismatches) o += "  mismatch: " + m + "\n";
    o += fmt::format("overall                         {}\n", rep.all_pass() ? "PASS" : "FAIL");
    out.write("tableau_report.txt", o);
    out.write("tableau_dump.txt", dump_tableau(t));
    out.write("timing.csv", fmt::format("stage,elapsed_seconds\ntableau,{:.6f}\n", seconds_since(t0)));
    return {rep.all_pass() ? kExitPass : kExitFail, {}, rep.all_pass() ? "tableau checks pass" : "tableau checks fail"};
}

RunResult run_freq(const RunConfig& c, Output& out) {
    const auto t0 = Clock::now();
    const ConstantTableau t = build_tableau(c.mu, c.tau);
    const FrequencySweep sw = frequency_sweep(t, c.frequency_samples, c.seed, c.rank_tol);
    const int n = static_cast<int>(sw.records.size());
    std::vector<Check> checks{
        {"numeric rank of B(xi) is 46 at every sample", double(sw.full_rank_count), double(n), sw.full_rank_count == n,
         fmt::format("{} of {} samples", sw.full_rank_count, n)},
        bound_check("max |B eta_j| / |B|", sw.max_null, 1e-10),
        bound_check("max |B Y1 - G| / |G|", sw.max_particular, 1e-10),
        bound_check("max |i xi1 y3 + i xi2 y7 + i xi3 y11|", sw.max_divergence, 1e-12),
    };
    std::string o = header("frequency-domain certification of the linear subsystem", c);
    o += format_checks(checks);
    out.write("freq_report.txt", o);
    out.write("freq_certificate.csv", certificate_csv(sw.records));
    out.write("timing.csv", fmt::format("stage,elapsed_seconds\nfrequency_sweep,{:.6f}\n", seconds_since(t0)));
    bool ok = true;
    for (const auto& ch : checks) ok = ok && ch.pass;
    return {ok ? kExitPass : kExitFail, {}, fmt::format("{} frequencies certified, {}", n, ok ? "pass" : "fail")};
}

RunResult run_greens(const RunConfig& c, Output& out) {
    const auto t0 = Clock::now();
    const auto checks = greens_checks(c);
    out.write("greens_report.txt", header("Newtonian potential, heat kernel and phi-function oracles", c) +
                                       format_checks(checks));
    out.write("timing.csv", fmt::format("stage,elapsed_seconds\ngreens_checks,{:.6f}\n", seconds_since(t0)));
    bool ok = true;
    for (const auto& ch : checks) ok = ok && ch.pass;
    return {ok ? kExitPass : kExitFail, {}, ok ? "greens oracles pass" : "greens oracles fail"};
}

RunResult run_bounds(const RunConfig& c, Output& out) {
    const auto t0 = Clock::now();
    const BoundConstants b =
        bound_constants(c.domain, c.mu, c.budget.alpha, c.budget.M, c.epsilon_trunc, c.capacity_samples);
    const SmallnessReport s = smallness_check(b, c.budget);
    out.write("bounds_report.txt", header("capacity, envelope constants and smallness conditions", c) + bounds_text(b, s));
    out.write("timing.csv", fmt::format("stage,elapsed_seconds\nbounds,{:.6f}\n", seconds_since(t0)));
    return {kExitPass, {}, fmt::format("capacity {:.6e}, smallness {}", b.M_K1, s.pass() ? "pass" : "fail")};
}

RunResult run_solve(const RunConfig& c, const RunOptions& opt, Output& out) {
    const auto t0 = Clock::now();
    const BoundConstants b =
        bound_constants(c.domain, c.mu, c.budget.alpha, c.budget.M, c.epsilon_trunc, c.capacity_samples);
    const SmallnessReport s = smallness_check(b, c.budget);
    std::string o = header("Picard solve, reconstruction and residual report", c);
    o += bounds_text(b, s);
    if (!s.pass() && !opt.override_smallness) {
        o += "solve refused: the domain fails the smallness conditions.\n"
             "run decompose-solve to split it into passing pieces, or pass --override-smallness.\n";
        out.write("solve_report.txt", o);
        return {kExitRefused, {}, "refused: smallness conditions fail (try decompose-solve)"};
    }
    if (!s.pass()) o += "smallness conditions fail; solving anyway on request.\n";
    const VectorField F = make_forcing(c.forcing, c.domain);
    const PieceSolve p = solve_piece(c, c.domain, F, true);
    o += "solve\n";
    o += fmt::format("  grid                   {}\n", p.grid.describe());
    o += piece_text(p, c);
    out.write("solve_report.txt", o);
    out.write("trace.csv", trace_csv(p.picard));
    out.write("fields.csv", fields_csv(p));
    out.write("timing.csv", timing_csv(p.picard) + fmt::format("total,{:.6f}\n", seconds_since(t0)));
    return {picard_exit(p.picard), {},
            fmt::format("{} after {} iterations", to_string(p.picard.status), p.picard.trace.size())};
}

RunResult run_decompose(const RunConfig& c, Output& out) {
    const auto t0 = Clock::now();
    PartitionSettings ps;
    ps.mu = c.mu;
    ps.epsilon_trunc = c.epsilon_trunc;
    ps.capacity_samples = c.capacity_samples;
    ps.max_depth = c.partition_max_depth;
    const PartitionResult part = partition_domain(c.domain, c.budget, ps);
    out.write("partition.txt", header("partition into pieces passing the smallness conditions", c) + part.report());
    if (!part.success) return {kExitFail, {}, "partition failed at the maximum depth"};

    const VectorField F = make_forcing(c.forcing, c.domain);
    std::string o = header("per-piece solves and assembled flow", c);
    std::string trace = "piece,iteration,delta,sup,holder,in_omega_c\n";
    std::string timing = "piece,iteration,elapsed_seconds\n";
    std::vector<Box> boxes;
    std::vector<FlowFields> flows;
    bool ok = true;
    for (std::size_t i = 0; i < part.pieces.size(); ++i) {
        const Domain piece{{part.pieces[i].box}, c.domain.T};
        const PieceSolve p = solve_piece(c, piece, restrict_to(F, piece), false);
        o += fmt::format("piece {}\n  grid                   {}\n", i, p.grid.describe());
        o += piece_text(p, c);
        for (const auto& t : p.picard.trace) {
            trace += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{}\n", i, t.iteration, t.delta, t.sup, t.holder,
                                 t.in_omega_c ? 1 : 0);
            timing += fmt::format("{},{},{:.6f}\n", i, t.iteration, t.elapsed);
        }
        ok = ok && p.picard.status == PicardStatus::Converged;
        boxes.push_back(part.pieces[i].box);
        flows.push_back(p.flow);
    }
    const AssembledFlow flow = assemble_global(boxes, flows);
    const Grid global = c.grid_for(c.domain.bounding_box());
    o += "assembled flow\n";
    o += fmt::format("  global grid            {}\n", global.describe());
    o += fmt::format("  cells touching piece interfaces (left undefined) {:.6e}\n", flow.mask_fraction(global));
    std::string csv = "t,x1,x2,x3,defined,u1,u2,u3,p\n";
    std::size_t undefined = 0;
    for (int m = 0; m < global.n[0]; ++m)
        for (int i = 0; i < global.n[1]; ++i)
            for (int j = 0; j < global.n[2]; ++j)
                for (int k = 0; k < global.n[3]; ++k) {
                    const Vec3 x = global.node(i, j, k);
                    const auto v = flow.eval(global.t(m), x);
                    csv += fmt::format("{:.10e},{:.10e},{:.10e},{:.10e},{}", global.t(m), x[0], x[1], x[2], v ? 1 : 0);
                    if (v)
                        for (double f : *v) csv += fmt::format(",{:.10e}", f);
                    else
                        csv += ",nan,nan,nan,nan";
                    csv += '\n';
                    undefined += v ? 0 : 1;
                }
    o += fmt::format("  global nodes on interfaces {} of {}\n", undefined, global.size());
    o += fmt::format("  all pieces converged   {}\n", ok ? "yes" : "no");
    out.write("decompose_report.txt", o);
    out.write("trace.csv", trace);
    out.write("fields.csv", csv);
    out.write("timing.csv", timing + fmt::format("total,,{:.6f}\n", seconds_since(t0)));
    return {ok ? kExitPass : kExitFail, {},
            fmt::format("{} pieces, {}", part.pieces.size(), ok ? "all converged" : "not all converged")};
}

}  // namespace

std::string format_checks(const std::vector<Check>& checks) {
    std::string o;
    bool all = true;
    for (const auto& c : checks) {
        o += fmt::format("{}  {:<62} {:.6e} (limit {:.3e})", c.pass ? "PASS" : "FAIL", c.name, c.value, c.threshold);
        if (!c.detail.empty()) o += "  " + c.detail;
        o += '\n';
        all = all && c.pass;
    }
    o += fmt::format("overall {}\n", all ? "PASS" : "FAIL");
    return o;
}

FrequencySweep frequency_sweep(const ConstantTableau& t, int count, unsigned long long seed, double rank_tol) {
    FrequencySweep sw;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> N(0.0, 1.0);
    for (const Frequency& f : sample_frequencies(count, seed)) {
        const Fhat F{cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng))};
        const FrequencyRecord r = certify_frequency(f, F, t, rank_tol);
        sw.full_rank_count += r.rank == 46 ? 1 : 0;
        sw.max_null = std::max(sw.max_null, r.null_residual);
        sw.max_particular = std::max(sw.max_particular, r.particular_residual);
        sw.max_divergence = std::max(sw.max_divergence, r.divergence_residual);
        sw.records.push_back(r);
    }
    return sw;
}

std::vector<Check> greens_checks(const RunConfig& c) {
    std::vector<Check> out;
    potential_checks(c, out);
    heat_checks(c, out);
    phi_checks(c, out);
    capacity_checks(c, out);
    return out;
}

PieceSolve solve_piece(const RunConfig& c, const Domain& piece, const VectorField& F, bool outer_support) {
    PieceSolve p;
    p.domain = piece;
    p.grid = c.grid_for(piece.bounding_box());
    const EngineSettings s = c.engine();
    p.w1 = forcing_potentials(F, piece, p.grid, s, outer_support);
    p.picard = picard(p.w1, piece, p.grid, s, c.budget, c.picard_options());
    p.flow = reconstruct(p.w1, p.picard.w2);
    const std::array<GridData, 3> Fs{sample(F[0], p.grid), sample(F[1], p.grid), sample(F[2], p.grid)};
    p.residual = ns_residual(p.flow, Fs, c.mu, c.tau, 1);
    p.deep_residual = ns_residual(p.flow, Fs, c.mu, c.tau, c.margin_for(p.grid));
    p.face_sup = face_sup(p.flow);
    return p;
}

RunResult run(const RunConfig& c, const RunOptions& opt) {
    validate(c);
    Output out(c.output);
    RunResult r;
    if (c.subcommand == "tableau-verify") r = run_tableau(c, out);
    else if (c.subcommand == "freq-verify") r = run_freq(c, out);
    else if (c.subcommand == "greens-verify") r = run_greens(c, out);
    else if (c.subcommand == "bounds") r = run_bounds(c, out);
    else if (c.subcommand == "solve") r = run_solve(c, opt, out);
    else if (c.subcommand == "decompose-solve") r = run_decompose(c, out);
    else throw ConfigError("subcommand", c.subcommand.empty() ? "no subcommand given" : "unknown subcommand");
    r.files = out.files;
    return r;
}

}  // namespace nsfp
