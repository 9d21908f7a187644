#pragma once

#include <array>

#include "nsfp/geometry.hpp"

namespace nsfp {

// Exact int_box 1 / |y - p| dy (corner sum of the closed-form antiderivative).
double box_inverse_distance_integral(const Box& box, const Vec3& p);

// (1/4 pi) int_K 1 / |y - p| dy.
double capacity_at(const Domain& K, const Vec3& p);

struct CapacityReport {
    double value = 0.0;  // M(K1)
    Vec3 argmax{0, 0, 0};
    int samples_per_axis = 0;
    double lattice_spacing = 0.0;
};

// Max of capacity_at over a lattice on the bounding box (points inside K) and the box centres,
// refined by a compass search that stays inside K.
CapacityReport domain_capacity(const Domain& K, int samples_per_axis = 9);

// Closed forms with d = t - tau1 > 0: pi^1.5 / d, 1.5 pi^1.5 / d, 0, 0, 0.
std::array<double, 5> phi_functions(double t, double tau1);
// The same integrals by scaled Gauss-Hermite quadrature (odd moments summed in symmetric pairs).
std::array<double, 5> phi_quadrature(double t, double tau1, int order = 20);

struct BoundConstants {
    double M_K1 = 0.0;
    double M_T1 = 0.0, M_T2 = 0.0, M_T3 = 0.0, M_T4 = 0.0;
    double Mp = 0.0, Mpp = 0.0, Mppp = 0.0;
    double phi1_max = 0.0, phi2_max = 0.0;
    double epsilon_trunc = 0.0;
    double spacetime_diameter = 0.0;
    bool truncated = true;       // envelopes taken over t - tau1 >= epsilon_trunc only
    bool phi_divergent = false;  // phi1, phi2 grow without bound as tau1 -> t
    CapacityReport capacity;
};

// Envelope constants for the lifted fields. T comes from K. epsilon_trunc <= 0 selects 1e-2 T.
BoundConstants bound_constants(const Domain& K, double mu, double alpha, double M, double epsilon_trunc,
                               int capacity_samples = 9);
// Same, with a capacity computed elsewhere.
BoundConstants bound_constants(const Domain& K, double mu, double alpha, double M, double epsilon_trunc,
                               const CapacityReport& capacity);

// Number of derivative terms combined per W-table entry (four terms over three summed fields).
inline constexpr double kWTableEnvelope = 12.0;

}  // namespace nsfp
