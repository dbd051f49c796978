#pragma once

#include <cassert>
#include <cmath>
#include <vector>

#include "ibdl/errors.hpp"

namespace ibdl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

enum class Discretization { FiniteDifference, FourierSpectral };

/// Periodic N x N Cartesian grid on a square box.
/// Node (i,j) sits at origin + (i*dx, j*dx); indices wrap periodically,
/// so the far box edge carries no duplicate node.
struct GridSpec {
    double box_length = 1.0;
    int n = 0;
    Vec2 origin{0.0, 0.0};

    GridSpec() = default;
    GridSpec(double box_length_, int n_, Vec2 origin_)
        : box_length(box_length_), n(n_), origin(origin_) {
        if (n < 4) throw Error("GridSpec: N must be >= 4");
        if (box_length <= 0.0) throw Error("GridSpec: box_length must be > 0");
    }

    double dx() const { return box_length / n; }
    Vec2 node(int i, int j) const { return {origin.x + i * dx(), origin.y + j * dx()}; }
    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }
    bool operator==(const GridSpec& o) const {
        return box_length == o.box_length && n == o.n && origin.x == o.origin.x &&
               origin.y == o.origin.y;
    }
};

/// Real scalar field on the grid, stored row-major with y as the slow index:
/// values[j*n + i] is the value at node (i,j).
struct ScalarField {
    GridSpec spec;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& s) : spec(s), values(size_t(s.n) * s.n, 0.0) {}

    double& operator()(int i, int j) { return values[size_t(j) * spec.n + i]; }
    double operator()(int i, int j) const { return values[size_t(j) * spec.n + i]; }
    double at_wrapped(int i, int j) const { return (*this)(spec.wrap(i), spec.wrap(j)); }

    double sum() const {
        long double s = 0.0L;
        for (double v : values) s += v;
        return double(s);
    }
    double mean() const { return sum() / double(values.size()); }
    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Pair of component fields sharing one grid.
struct VectorField {
    ScalarField x;
    ScalarField y;

    VectorField() = default;
    explicit VectorField(const GridSpec& s) : x(s), y(s) {}
};

}  // namespace ibdl
