#include "nsfp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nsfp/errors.hpp"

namespace nsfp {

Vec3 Box::center() const {
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
}

double Box::diameter() const {
    return std::sqrt(extent(0) * extent(0) + extent(1) * extent(1) + extent(2) * extent(2));
}

bool Box::contains(const Vec3& x, double slack) const {
    for (int a = 0; a < 3; ++a)
        if (x[a] < lo[a] - slack || x[a] > hi[a] + slack) return false;
    return true;
}

bool Box::strictly_contains(const Vec3& x) const {
    for (int a = 0; a < 3; ++a)
        if (x[a] <= lo[a] || x[a] >= hi[a]) return false;
    return true;
}

std::array<Box, 8> Box::bisect() const {
    const Vec3 c = center();
    std::array<Box, 8> out;
    for (int o = 0; o < 8; ++o) {
        for (int a = 0; a < 3; ++a) {
            const bool upper = (o >> a) & 1;
            out[o].lo[a] = upper ? c[a] : lo[a];
            out[o].hi[a] = upper ? hi[a] : c[a];
        }
    }
    return out;
}

Box Box::scaled(double s, const Vec3& about) const {
    Box b;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] = about[a] + s * (lo[a] - about[a]);
        b.hi[a] = about[a] + s * (hi[a] - about[a]);
    }
    return b;
}

bool interiors_overlap(const Box& a, const Box& b) {
    for (int k = 0; k < 3; ++k)
        if (a.hi[k] <= b.lo[k] || b.hi[k] <= a.lo[k]) return false;
    return true;
}

void Domain::validate(const char* module) const {
    if (boxes.empty()) throw ParameterError(module, "empty domain");
    if (!(T > 0)) throw ParameterError(module, "time horizon T must be positive");
    for (const auto& b : boxes)
        if (!(b.extent(0) > 0 && b.extent(1) > 0 && b.extent(2) > 0))
            throw ParameterError(module, "box with non-positive volume");
}

bool Domain::contains(const Vec3& x) const {
    return std::any_of(boxes.begin(), boxes.end(), [&](const Box& b) { return b.contains(x); });
}

Box Domain::bounding_box() const {
    Box bb = boxes.front();
    for (const auto& b : boxes)
        for (int a = 0; a < 3; ++a) {
            bb.lo[a] = std::min(bb.lo[a], b.lo[a]);
            bb.hi[a] = std::max(bb.hi[a], b.hi[a]);
        }
    return bb;
}

double Domain::spatial_diameter() const {
    // The diameter of a box union is attained between box corners.
    double best = 0.0;
    for (const auto& a : boxes)
        for (const auto& b : boxes)
            for (int ca = 0; ca < 8; ++ca)
                for (int cb = 0; cb < 8; ++cb) {
                    double d2 = 0.0;
                    for (int k = 0; k < 3; ++k) {
                        const double pa = ((ca >> k) & 1) ? a.hi[k] : a.lo[k];
                        const double pb = ((cb >> k) & 1) ? b.hi[k] : b.lo[k];
                        d2 += (pa - pb) * (pa - pb);
                    }
                    best = std::max(best, d2);
                }
    return std::sqrt(best);
}

double Domain::spacetime_diameter() const {
    const double d = spatial_diameter();
    return std::sqrt(d * d + T * T);
}

double Domain::volume() const {
    double v = 0.0;
    for (const auto& b : boxes) v += b.volume();
    return v;
}

Domain Domain::scaled(double s, const Vec3& about) const {
    Domain d;
    d.T = T;
    for (const auto& b : boxes) d.boxes.push_back(b.scaled(s, about));
    return d;
}

bool Grid::same_as(const Grid& o) const {
    return n == o.n && T == o.T && box.lo == o.box.lo && box.hi == o.box.hi;
}

Grid Grid::refined() const {
    Grid g = *this;
    for (auto& c : g.n) c = 2 * c - 1;
    return g;
}

std::string Grid::describe() const {
    return fmt::format("[0,{}] x [{},{}] x [{},{}] x [{},{}] with {}x{}x{}x{} nodes", T, box.lo[0],
                       box.hi[0], box.lo[1], box.hi[1], box.lo[2], box.hi[2], n[0], n[1], n[2], n[3]);
}

double GridData::sup_norm() const {
    double s = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        s = std::max(s, std::abs(x));
    }
    return s;
}

static void require_same(const Grid& a, const Grid& b) {
    if (!a.same_as(b)) throw GridError("field", "grid mismatch");
}

GridData& GridData::operator+=(const GridData& o) {
    require_same(grid, o.grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
}

GridData& GridData::operator-=(const GridData& o) {
    require_same(grid, o.grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}

GridData& GridData::operator*=(double s) {
    for (auto& x : v) x *= s;
    return *this;
}

GridData operator+(GridData a, const GridData& b) { return a += b; }
GridData operator-(GridData a, const GridData& b) { return a -= b; }
GridData operator*(double s, GridData a) { return a *= s; }

GridData hadamard(const GridData& a, const GridData& b) {
    require_same(a.grid, b.grid);
    GridData out(a.grid);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
    return out;
}

double sup_distance(const GridData& a, const GridData& b) {
    require_same(a.grid, b.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        const double d = std::abs(a.v[i] - b.v[i]);
        if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
        s = std::max(s, d);
    }
    return s;
}

Domain column_ball(double R, int n, double T) {
    Domain K;
    K.T = T;
    const double h = 2.0 * R / n;
    const int sub = 16;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < sub; ++a)
                for (int b = 0; b < sub; ++b) {
                    const double x = -R + (i + (a + 0.5) / sub) * h;
                    const double y = -R + (j + (b + 0.5) / sub) * h;
                    const double r2 = R * R - x * x - y * y;
                    if (r2 > 0) acc += 2.0 * std::sqrt(r2);
                }
            const double height = acc / (sub * sub);
            if (height <= 0) continue;
            Box b;
            b.lo = {-R + i * h, -R + j * h, -0.5 * height};
            b.hi = {-R + (i + 1) * h, -R + (j + 1) * h, 0.5 * height};
            K.boxes.push_back(b);
        }
    return K;
}

}  // namespace nsfp
