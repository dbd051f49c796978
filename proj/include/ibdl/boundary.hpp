#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ibdl/curves.hpp"
#include "ibdl/errors.hpp"
#include "ibdl/grid.hpp"

namespace ibdl {

/// Which side of the boundary the PDE domain Omega lies on.
enum class Orientation { InteriorDomain, ExteriorDomain };

enum class NormalsMode { UseExactIfAvailable, ForceEstimated };

/// Lagrangian boundary: points X(s_i) ordered counterclockwise along the
/// closed curve, arclength weights ds_i, and unit normals pointing out of
/// the PDE domain (into the curve interior for ExteriorDomain).
struct ImmersedBoundary {
    std::vector<Vec2> points;
    std::vector<double> ds;
    std::vector<Vec2> normals;
    Orientation orientation = Orientation::InteriorDomain;

    int size() const { return int(points.size()); }

    Vec2 centroid() const {
        Vec2 c{0, 0};
        for (const Vec2& p : points) c = c + p;
        return (1.0 / points.size()) * c;
    }
};

/// Chord-based normal estimate n_i = (Y_{i+1}-Y_{i-1}, -(X_{i+1}-X_{i-1})) / ||.||,
/// negated for ExteriorDomain. Requires >= 3 points.
inline void estimate_normals(ImmersedBoundary& ib) {
    const int n = ib.size();
    if (n < 3) throw Error("estimate_normals: need at least 3 points");
    ib.normals.resize(n);
    const double sign = ib.orientation == Orientation::ExteriorDomain ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = ib.points[(i + n - 1) % n];
        const Vec2& next = ib.points[(i + 1) % n];
        const Vec2 d = next - prev;
        const double len = norm(d);
        if (len < 1e-14) throw CoincidentPoints("estimate_normals: neighbors coincide at index " + std::to_string(i));
        ib.normals[i] = {sign * d.y / len, -sign * d.x / len};
    }
}

/// Chord-length spacing ds_i = ||X_{i+1} - X_i|| (periodic wrap).
inline void estimate_spacing(ImmersedBoundary& ib) {
    const int n = ib.size();
    if (n < 3) throw Error("estimate_spacing: need at least 3 points");
    ib.ds.resize(n);
    for (int i = 0; i < n; ++i) ib.ds[i] = norm(ib.points[(i + 1) % n] - ib.points[i]);
}

namespace detail {

struct ArclengthTable {
    std::vector<double> t;    // parameter samples, 0..1
    std::vector<double> cum;  // cumulative length at each sample
    double total = 0.0;

    /// Parameter value at arclength s (linear interpolation).
    double param_at(double s) const {
        auto it = std::lower_bound(cum.begin(), cum.end(), s);
        if (it == cum.begin()) return t.front();
        if (it == cum.end()) return t.back();
        const size_t hi = size_t(it - cum.begin());
        const size_t lo = hi - 1;
        const double span = cum[hi] - cum[lo];
        const double w = span > 0.0 ? (s - cum[lo]) / span : 0.0;
        return t[lo] + w * (t[hi] - t[lo]);
    }
};

inline ArclengthTable build_arclength_table(const ParametricCurve& c, int samples) {
    ArclengthTable tab;
    tab.t.resize(samples + 1);
    tab.cum.resize(samples + 1);
    Vec2 prev = c.point(0.0);
    tab.t[0] = 0.0;
    tab.cum[0] = 0.0;
    for (int m = 1; m <= samples; ++m) {
        const double tm = double(m) / samples;
        const Vec2 p = c.point(tm);
        tab.t[m] = tm;
        tab.cum[m] = tab.cum[m - 1] + norm(p - prev);
        prev = p;
    }
    tab.total = tab.cum.back();
    return tab;
}

}  // namespace detail

/// Place N_IB = round(L_IB / target_spacing) points equally spaced in
/// arclength (ds_i = L_IB/N_IB for all i), via a dense cumulative-length
/// table with >= 64*N_IB samples. Rounding is half-up.
inline ImmersedBoundary discretize_curve(const ParametricCurve& c, double target_spacing,
                                         Orientation orientation,
                                         NormalsMode normals_mode = NormalsMode::UseExactIfAvailable) {
    if (target_spacing <= 0.0) throw Error("discretize_curve: target_spacing must be > 0");
    auto round_half_up = [](double v) { return int(std::floor(v + 0.5)); };

    auto tab = detail::build_arclength_table(c, 4096);
    if (tab.total < 10.0 * target_spacing)
        throw DegenerateCurve("discretize_curve: curve length " + std::to_string(tab.total) +
                              " below 10 x target spacing");
    int n_ib = round_half_up(tab.total / target_spacing);
    if (64 * n_ib > 4096) {
        tab = detail::build_arclength_table(c, 64 * n_ib);
        n_ib = round_half_up(tab.total / target_spacing);
        if (64 * n_ib > int(tab.t.size()) - 1) tab = detail::build_arclength_table(c, 64 * n_ib);
    }

    ImmersedBoundary ib;
    ib.orientation = orientation;
    ib.points.resize(n_ib);
    ib.ds.assign(n_ib, tab.total / n_ib);
    for (int i = 0; i < n_ib; ++i)
        ib.points[i] = c.point(tab.param_at(tab.total * i / n_ib));

    if (normals_mode == NormalsMode::UseExactIfAvailable && c.has_exact_normal()) {
        ib.normals.resize(n_ib);
        const double sign = orientation == Orientation::ExteriorDomain ? -1.0 : 1.0;
        for (int i = 0; i < n_ib; ++i) {
            Vec2 nrm = c.normal(tab.param_at(tab.total * i / n_ib));
            ib.normals[i] = {sign * nrm.x, sign * nrm.y};
        }
    } else {
        estimate_normals(ib);
    }
    return ib;
}

/// Boundary import: plain text, one "x y" pair per line, closed curve
/// implied. Spacing and normals are estimated on load.
inline ImmersedBoundary load_boundary_points(const std::string& path, Orientation orientation) {
    std::ifstream in(path);
    if (!in) throw Error("load_boundary_points: cannot open " + path);
    ImmersedBoundary ib;
    ib.orientation = orientation;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double x, y;
        if (ls >> x >> y) ib.points.push_back({x, y});
    }
    if (ib.size() < 3) throw Error("load_boundary_points: fewer than 3 points in " + path);
    estimate_spacing(ib);
    estimate_normals(ib);
    return ib;
}

}  // namespace ibdl
