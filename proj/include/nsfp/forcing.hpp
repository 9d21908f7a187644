#pragma once

#include <array>
#include <string>

#include "nsfp/field.hpp"
#include "nsfp/geometry.hpp"

namespace nsfp {

using VectorField = std::array<ScalarField, 3>;

// Time-independent bump presets on [0, T] x K.
//   zero            : F = 0
//   gaussian-bump   : A d exp(-|x-c|^2 / (2 (r/3)^2)) chi(|x-c| / r), chi a smooth cutoff
//   polynomial-bump : A d (1 - |x-c|^2 / r^2)^4
//   swirl-bump      : A grad(psi) x d with psi = (1 - |x-c|^2 / r^2)^5, divergence free
struct ForcingSpec {
    std::string preset = "zero";
    double amplitude = 0.0;
    Vec3 center{0.5, 0.5, 0.5};
    double radius = 0.25;
    Vec3 direction{1.0, 0.0, 0.0};
};

// Throws ParameterError for an unknown preset or bad parameters and SupportError when the bump
// ball is not inside K.
VectorField make_forcing(const ForcingSpec& spec, const Domain& K);

VectorField sum(const VectorField& a, const VectorField& b);
// F on the piece, zero elsewhere.
VectorField restrict_to(const VectorField& F, const Domain& piece);

// Throws SupportError when F is not negligible at grid nodes on the boundary of K.
void check_support(const VectorField& F, const Domain& K, const Grid& g, double rel_tol = 1e-12);

}  // namespace nsfp
