#include "nsfp/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "nsfp/errors.hpp"
#include "nsfp/quadrature.hpp"

namespace nsfp {

namespace {

// log(z + r) without cancellation for z < 0.
double log_z_plus_r(double x, double y, double z, double r) {
    if (z >= 0.0) return std::log(z + r);
    return std::log((x * x + y * y) / (r - z));
}

double antiderivative(double x, double y, double z) {
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r == 0.0) return 0.0;
    double f = 0.0;
    if (x * y != 0.0) f += x * y * log_z_plus_r(x, y, z, r);
    if (y * z != 0.0) f += y * z * log_z_plus_r(y, z, x, r);
    if (z * x != 0.0) f += z * x * log_z_plus_r(z, x, y, r);
    if (x != 0.0) f -= 0.5 * x * x * std::atan(y * z / (x * r));
    if (y != 0.0) f -= 0.5 * y * y * std::atan(z * x / (y * r));
    if (z != 0.0) f -= 0.5 * z * z * std::atan(x * y / (z * r));
    return f;
}

const double kPi15 = std::pow(M_PI, 1.5);

}  // namespace

double box_inverse_distance_integral(const Box& box, const Vec3& p) {
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        const int i = c & 1, j = (c >> 1) & 1, k = (c >> 2) & 1;
        const double x = (i ? box.hi[0] : box.lo[0]) - p[0];
        const double y = (j ? box.hi[1] : box.lo[1]) - p[1];
        const double z = (k ? box.hi[2] : box.lo[2]) - p[2];
        const double sign = ((i + j + k) % 2 == 1) ? 1.0 : -1.0;
        acc += sign * antiderivative(x, y, z);
    }
    return acc;
}

double capacity_at(const Domain& K, const Vec3& p) {
    double acc = 0.0;
    for (const auto& b : K.boxes) acc += box_inverse_distance_integral(b, p);
    return acc / (4.0 * M_PI);
}

CapacityReport domain_capacity(const Domain& K, int samples_per_axis) {
    K.validate("greens_operators");
    if (samples_per_axis < 2) throw ParameterError("greens_operators", "capacity lattice needs at least 2 samples per axis");
    const Box bb = K.bounding_box();
    const int n = samples_per_axis;
    CapacityReport rep;
    rep.samples_per_axis = n;
    rep.lattice_spacing = std::max({bb.extent(0), bb.extent(1), bb.extent(2)}) / (n - 1);
    rep.value = -1.0;

    auto consider = [&](const Vec3& p) {
        const double v = capacity_at(K, p);
        if (v > rep.value) {
            rep.value = v;
            rep.argmax = p;
        }
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 p{bb.lo[0] + bb.extent(0) * i / (n - 1), bb.lo[1] + bb.extent(1) * j / (n - 1),
                             bb.lo[2] + bb.extent(2) * k / (n - 1)};
                if (K.contains(p)) consider(p);
            }
    for (const auto& b : K.boxes) consider(b.center());

    double step = 0.5 * rep.lattice_spacing;
    const double stop = 1e-7 * K.spatial_diameter();
    while (step > stop) {
        bool moved = false;
        for (int a = 0; a < 3 && !moved; ++a)
            for (double s : {step, -step}) {
                Vec3 p = rep.argmax;
                p[a] += s;
                if (!K.contains(p)) continue;
                const double v = capacity_at(K, p);
                if (v > rep.value) {
                    rep.value = v;
                    rep.argmax = p;
                    moved = true;
                    break;
                }
            }
        if (!moved) step *= 0.5;
    }
    return rep;
}

std::array<double, 5> phi_functions(double t, double tau1) {
    if (tau1 < 0.0 || !(tau1 < t)) throw DomainError("greens_operators", "phi functions need 0 <= tau1 < t");
    const double d = t - tau1;
    return {kPi15 / d, 1.5 * kPi15 / d, 0.0, 0.0, 0.0};
}

std::array<double, 5> phi_quadrature(double t, double tau1, int order) {
    if (tau1 < 0.0 || !(tau1 < t)) throw DomainError("greens_operators", "phi functions need 0 <= tau1 < t");
    const double d = t - tau1;
    const QuadratureRule gh = gauss_hermite(order);
    const int n = order;
    // S[k] = sum w u^k with mirrored nodes paired, so odd moments vanish exactly.
    double S[4] = {0, 0, 0, 0};
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        for (int k = 0; k < 4; ++k)
            S[k] += gh.weights[i] * std::pow(gh.nodes[i], k) + gh.weights[j] * std::pow(gh.nodes[j], k);
    }
    if (n % 2 == 1) S[0] += gh.weights[n / 2];
    // int theta^k exp(-c theta^2) dtheta = c^-(k+1)/2 S[k]
    auto m = [&](int k, double c) { return std::pow(c, -0.5 * (k + 1)) * S[k]; };
    std::array<double, 5> out;
    const double c4 = std::pow(d, 4), c6 = std::pow(d, 6), c8 = std::pow(d, 8);
    out[0] = std::pow(d, 5) * std::pow(m(0, c4), 3);
    out[1] = std::pow(d, 14) * 3.0 * m(2, c6) * m(0, c6) * m(0, c6);
    out[2] = std::pow(d, 7.5) * m(1, c4) * m(0, c4) * m(0, c4);
    out[3] = std::pow(d, 10.5) * m(1, c6) * m(0, c6) * m(0, c6);
    out[4] = std::pow(d, 22.5) * (m(3, c8) * m(0, c8) * m(0, c8) + 2.0 * m(1, c8) * m(2, c8) * m(0, c8));
    return out;
}

BoundConstants bound_constants(const Domain& K, double mu, double alpha, double M, double epsilon_trunc,
                               int capacity_samples) {
    return bound_constants(K, mu, alpha, M, epsilon_trunc, domain_capacity(K, capacity_samples));
}

BoundConstants bound_constants(const Domain& K, double mu, double alpha, double M, double epsilon_trunc,
                               const CapacityReport& capacity) {
    K.validate("greens_operators");
    if (!(alpha > 0 && alpha < 1)) throw ParameterError("greens_operators", "alpha must lie in (0, 1)");
    if (!(mu > 0)) throw ParameterError("greens_operators", "mu must be positive");
    const double T = K.T;
    BoundConstants b;
    b.capacity = capacity;
    b.M_K1 = capacity.value;
    b.epsilon_trunc = epsilon_trunc > 0 ? epsilon_trunc : 1e-2 * T;
    const double eps = b.epsilon_trunc;

    // phi depends on t - tau1 only and the closed forms are monotone in it, so the envelope over
    // t - tau1 >= eps sits at t - tau1 = eps.
    const auto phi = phi_functions(eps, 0.0);
    b.phi1_max = phi[0];
    b.phi2_max = phi[1];
    b.Mp = std::max(phi[0], phi[1]);
    b.Mpp = std::abs(phi[2]);
    b.Mppp = std::max(std::abs(phi[3]), std::abs(phi[4]));
    const auto near = phi_functions(1e-3 * eps, 0.0);
    b.phi_divergent = near[0] > 100.0 * phi[0] && near[1] > 100.0 * phi[1];
    b.truncated = true;

    const double c = 1.0 / kPi15;
    const double sm = std::sqrt(mu);
    b.M_T1 = std::max({T * M, M + c * 2.5 * T * M * b.Mp, c * (T / sm) * M * b.Mpp,
                       c * (M / sm) * b.Mpp + c * (3.5 / sm) * T * M * b.Mppp});
    b.M_T2 = b.M_T1;
    b.M_T3 = kWTableEnvelope * b.M_T2;
    b.spacetime_diameter = K.spacetime_diameter();
    b.M_T4 = 4.0 * b.M_T3 * std::pow(b.spacetime_diameter, 1.0 - alpha);
    return b;
}

}  // namespace nsfp
