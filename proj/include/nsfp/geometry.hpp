#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace nsfp {

using Vec3 = std::array<double, 3>;
using MultiIndex = std::array<int, 3>;  // spatial derivative orders along x1, x2, x3

inline int order(const MultiIndex& b) { return b[0] + b[1] + b[2]; }

struct Box {
    Vec3 lo{0, 0, 0};
    Vec3 hi{1, 1, 1};

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const { return extent(0) * extent(1) * extent(2); }
    Vec3 center() const;
    double diameter() const;
    // Closed-box membership; points on faces count as inside.
    bool contains(const Vec3& x, double slack = 0.0) const;
    bool strictly_contains(const Vec3& x) const;
    // Eight octant children of an axis-aligned bisection.
    std::array<Box, 8> bisect() const;
    Box scaled(double s, const Vec3& about) const;
};

bool interiors_overlap(const Box& a, const Box& b);

// A finite union of axis-aligned boxes over the time window [0, T].
struct Domain {
    std::vector<Box> boxes;
    double T = 1.0;

    void validate(const char* module) const;
    bool contains(const Vec3& x) const;
    Box bounding_box() const;
    double spatial_diameter() const;
    // Diameter of [0,T] x K1 in space-time.
    double spacetime_diameter() const;
    double volume() const;
    Domain scaled(double s, const Vec3& about) const;
};

// Ball of radius R about the origin as n x n vertical columns whose heights are cell averages of
// the chord length, so the volume matches the ball.
Domain column_ball(double R, int n = 41, double T = 1.0);

// Tensor grid of nodes over [0,T] x box, endpoints included.
struct Grid {
    Box box;
    double T = 1.0;
    std::array<int, 4> n{2, 2, 2, 2};  // t, x1, x2, x3

    double t(int m) const { return n[0] > 1 ? T * m / (n[0] - 1) : 0.0; }
    double dt() const { return n[0] > 1 ? T / (n[0] - 1) : 0.0; }
    double h(int axis) const { return box.extent(axis) / (n[axis + 1] - 1); }
    double x(int axis, int i) const { return box.lo[axis] + i * h(axis); }
    Vec3 node(int i, int j, int k) const { return {x(0, i), x(1, j), x(2, k)}; }
    std::size_t spatial_size() const { return std::size_t(n[1]) * n[2] * n[3]; }
    std::size_t size() const { return std::size_t(n[0]) * spatial_size(); }
    std::size_t index(int m, int i, int j, int k) const {
        return ((std::size_t(m) * n[1] + i) * n[2] + j) * n[3] + k;
    }
    std::size_t cell_count() const { return std::size_t(n[1] - 1) * (n[2] - 1) * (n[3] - 1); }
    bool same_as(const Grid& o) const;
    // Same spacing, refined by 2 in every axis (2n-1 nodes).
    Grid refined() const;
    std::string describe() const;
};

// Node samples of one scalar quantity over a Grid; layout t-major, x3 fastest.
struct GridData {
    Grid grid;
    std::vector<double> v;

    GridData() = default;
    explicit GridData(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& at(int m, int i, int j, int k) { return v[grid.index(m, i, j, k)]; }
    double at(int m, int i, int j, int k) const { return v[grid.index(m, i, j, k)]; }
    double* slice(int m) { return v.data() + std::size_t(m) * grid.spatial_size(); }
    const double* slice(int m) const { return v.data() + std::size_t(m) * grid.spatial_size(); }

    double sup_norm() const;
    GridData& operator+=(const GridData& o);
    GridData& operator-=(const GridData& o);
    GridData& operator*=(double s);
};

GridData operator+(GridData a, const GridData& b);
GridData operator-(GridData a, const GridData& b);
GridData operator*(double s, GridData a);
GridData hadamard(const GridData& a, const GridData& b);
double sup_distance(const GridData& a, const GridData& b);

}  // namespace nsfp
