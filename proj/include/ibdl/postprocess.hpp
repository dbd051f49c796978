#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ibdl/coupling.hpp"
#include "ibdl/grid.hpp"
#include "ibdl/operators.hpp"

namespace ibdl {

/// Distance from p to the segment [a,b].
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double den = dot(ab, ab);
    double t = den > 0.0 ? dot(p - a, ab) / den : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

/// Indicator flags for the interior of the discretized curve.
/// `inside_curve` marks the Gamma-interior; the Omega side follows from the
/// boundary orientation.
struct InteriorMask {
    GridSpec spec;
    Orientation orientation = Orientation::InteriorDomain;
    std::vector<uint8_t> inside_curve;

    bool inside(int i, int j) const { return inside_curve[size_t(j) * spec.n + i] != 0; }
    bool in_domain(int i, int j) const {
        return orientation == Orientation::InteriorDomain ? inside(i, j) : !inside(i, j);
    }
    std::vector<uint8_t> domain_flags() const {
        std::vector<uint8_t> out(inside_curve.size());
        for (size_t t = 0; t < out.size(); ++t)
            out[t] = orientation == Orientation::InteriorDomain ? inside_curve[t]
                                                                : uint8_t(!inside_curve[t]);
        return out;
    }
};

/// Omega-side grid points within m1 meshwidths of the boundary polyline.
struct BandMask {
    GridSpec spec;
    int m1 = 0;
    std::vector<uint8_t> flags;

    bool in_band(int i, int j) const { return flags[size_t(j) * spec.n + i] != 0; }
    int count() const {
        int c = 0;
        for (uint8_t f : flags) c += f != 0;
        return c;
    }
};

namespace detail {

inline double min_distance_to_polyline(const ImmersedBoundary& ib, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    const int n = ib.size();
    for (int i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(p, ib.points[i], ib.points[(i + 1) % n]));
    return best;
}

}  // namespace detail

/// Flag the interior of the discretized curve by solving the mean-zero
/// Poisson problem Delta u + S~(1) = 0 with the dipole oriented out of the
/// curve interior, shifting so a far reference point (the grid corner by
/// default) maps to 0, and thresholding at 1/2.
inline InteriorMask flag_interior(const ImmersedBoundary& ib, const GridSpec& spec,
                                  Discretization d, std::optional<Vec2> far_point = {}) {
    Vec2 ref = far_point.value_or(spec.node(0, 0));
    const int ri = spec.wrap(int(std::lround((ref.x - spec.origin.x) / spec.dx())));
    const int rj = spec.wrap(int(std::lround((ref.y - spec.origin.y) / spec.dx())));
    if (!far_point && detail::min_distance_to_polyline(ib, spec.node(ri, rj)) < 4.0 * spec.dx())
        throw AmbiguousCorner("flag_interior: grid corner within 4 dx of the boundary; supply a far point");

    // unit dipole with normals pointing out of the curve interior
    const double sign = ib.orientation == Orientation::ExteriorDomain ? -1.0 : 1.0;
    BoundaryDensity ones(ib.size(), sign);
    ScalarField rhs = spread_dipole(ib, ones, spec, d);
    for (double& v : rhs.values) v = -v;
    ScalarField chi = helmholtz_invert(rhs, 0.0, d);

    const double shift = chi(ri, rj);
    InteriorMask mask;
    mask.spec = spec;
    mask.orientation = ib.orientation;
    mask.inside_curve.resize(chi.values.size());
    for (size_t t = 0; t < chi.values.size(); ++t)
        mask.inside_curve[t] = (chi.values[t] - shift) > 0.5 ? 1 : 0;
    return mask;
}

/// Omega-side points whose distance to the boundary polyline is <= m1 dx.
inline BandMask flag_band(const ImmersedBoundary& ib, const InteriorMask& mask, int m1) {
    const GridSpec& spec = mask.spec;
    BandMask band;
    band.spec = spec;
    band.m1 = m1;
    band.flags.assign(mask.inside_curve.size(), 0);
    if (m1 <= 0) return band;

    const double rad = m1 * spec.dx();
    const int n = spec.n;
    std::vector<double> mind(band.flags.size(), std::numeric_limits<double>::infinity());
    const int pad = int(std::ceil(rad / spec.dx())) + 1;
    for (int e = 0; e < ib.size(); ++e) {
        const Vec2 a = ib.points[e];
        const Vec2 b = ib.points[(e + 1) % ib.size()];
        const int i0 = int(std::floor((std::min(a.x, b.x) - spec.origin.x) / spec.dx())) - pad;
        const int i1 = int(std::ceil((std::max(a.x, b.x) - spec.origin.x) / spec.dx())) + pad;
        const int j0 = int(std::floor((std::min(a.y, b.y) - spec.origin.y) / spec.dx())) - pad;
        const int j1 = int(std::ceil((std::max(a.y, b.y) - spec.origin.y) / spec.dx())) + pad;
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const Vec2 p = spec.node(i, j);  // un-wrapped coordinates near the segment
                const size_t idx = size_t(spec.wrap(j)) * n + spec.wrap(i);
                mind[idx] = std::min(mind[idx], point_segment_distance(p, a, b));
            }
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const size_t idx = size_t(j) * n + i;
            band.flags[idx] = (mind[idx] <= rad && mask.in_domain(i, j)) ? 1 : 0;
        }
    return band;
}

namespace detail {

/// Projection parameter t with x_A = x2 + t (x1 - x2); t=1 at x1, t=0 at x2.
inline double projection_parameter(Vec2 xp, Vec2 x1, Vec2 x2) {
    const Vec2 d = x1 - x2;
    const double den = dot(d, d);
    if (den < 1e-28) throw DegenerateSegment("projection: boundary points coincide");
    return dot(xp - x2, d) / den;
}

/// Linear interpolation of boundary values at the projected point x_A.
inline double blend_boundary_values(Vec2 xA, Vec2 x1, Vec2 x2, double u1, double u2) {
    const double len = norm(x2 - x1);
    if (len < 1e-14) throw DegenerateSegment("boundary blend: segment endpoints coincide");
    return u1 * norm(xA - x2) / len + u2 * norm(xA - x1) / len;
}

struct Near3 {
    std::array<int, 3> idx{-1, -1, -1};
    std::array<double, 3> d{std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity()};

    void offer(int i, double dist) {
        // strict comparisons keep ties resolved toward the lower index
        for (int slot = 0; slot < 3; ++slot) {
            if (dist < d[slot]) {
                for (int t = 2; t > slot; --t) {
                    d[t] = d[t - 1];
                    idx[t] = idx[t - 1];
                }
                d[slot] = dist;
                idx[slot] = i;
                return;
            }
        }
    }
};

}  // namespace detail

struct NearBoundaryStats {
    int fallback_count = 0;  // x_B landed outside Omega; boundary value used alone
};

/// Replace band values with the two-point linear interpolation between the
/// projected boundary point x_A and the interior point x_B = x_A +
/// m2 dx (x_p - x_A)/||x_p - x_A||, whose value is bilinearly interpolated
/// from the raw field. Off-band cells are untouched.
inline ScalarField interpolate_near_boundary(const ScalarField& u, const ImmersedBoundary& ib,
                                             const BoundaryDensity& boundary_values,
                                             const BandMask& band, const InteriorMask& mask,
                                             int m2, NearBoundaryStats* stats = nullptr) {
    const GridSpec& spec = u.spec;
    ScalarField out = u;
    NearBoundaryStats local;
    const int n = spec.n;
    const int n_ib = ib.size();

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!band.in_band(i, j)) continue;
            const Vec2 xp = spec.node(i, j);

            detail::Near3 near;
            for (int p = 0; p < n_ib; ++p) near.offer(p, norm(ib.points[p] - xp));
            int i1 = near.idx[0], i2 = near.idx[1];
            double t = detail::projection_parameter(xp, ib.points[i1], ib.points[i2]);
            if (t < 0.0 || t > 1.0) {
                // widen to the outermost pair among the three nearest points
                const std::array<int, 3> cand{near.idx[0], near.idx[1], near.idx[2]};
                double best = -1.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = a + 1; b < 3; ++b) {
                        const double sep = norm(ib.points[cand[a]] - ib.points[cand[b]]);
                        if (sep > best) {
                            best = sep;
                            i1 = cand[a];
                            i2 = cand[b];
                        }
                    }
                t = std::clamp(detail::projection_parameter(xp, ib.points[i1], ib.points[i2]), 0.0, 1.0);
            }
            const Vec2 x1 = ib.points[i1], x2 = ib.points[i2];
            const Vec2 xA = x2 + t * (x1 - x2);
            const double uA = detail::blend_boundary_values(xA, x1, x2, boundary_values[i1], boundary_values[i2]);

            const double dpA = norm(xp - xA);
            if (dpA < 1e-14) {  // grid point sits on the boundary segment
                out(i, j) = uA;
                continue;
            }
            const Vec2 xB = xA + (m2 * spec.dx() / dpA) * (xp - xA);

            const double gx = (xB.x - spec.origin.x) / spec.dx();
            const double gy = (xB.y - spec.origin.y) / spec.dx();
            const int bi = int(std::floor(gx));
            const int bj = int(std::floor(gy));
            const double fx = gx - bi;
            const double fy = gy - bj;
            const int i00 = spec.wrap(bi), i10 = spec.wrap(bi + 1);
            const int j00 = spec.wrap(bj), j10 = spec.wrap(bj + 1);
            const bool in_omega = mask.in_domain(i00, j00) && mask.in_domain(i10, j00) &&
                                  mask.in_domain(i00, j10) && mask.in_domain(i10, j10);
            if (!in_omega) {
                out(i, j) = uA;  // x_B crossed out of the domain
                ++local.fallback_count;
                continue;
            }
            const double uB = fx * fy * u(i10, j10) + fy * (1.0 - fx) * u(i00, j10) +
                              fx * (1.0 - fy) * u(i10, j00) +
                              (1.0 - fx - fy + fx * fy) * u(i00, j00);
            const double dBA = norm(xB - xA);
            out(i, j) = uA * norm(xB - xp) / dBA + uB * dpA / dBA;
        }
    if (stats) *stats = local;
    return out;
}

struct ErrorNorms {
    double linf = 0.0;
    double l2 = 0.0;
};

/// L-infinity and dx-weighted L2 norms of u - analytic over the region flags.
inline ErrorNorms error_norms(const ScalarField& u, const std::function<double(double, double)>& analytic,
                              const std::vector<uint8_t>& region) {
    const GridSpec& spec = u.spec;
    if (region.size() != u.values.size()) throw Error("error_norms: region size mismatch");
    ErrorNorms norms;
    long double sq = 0.0L;
    bool any = false;
    for (int j = 0; j < spec.n; ++j)
        for (int i = 0; i < spec.n; ++i) {
            if (!region[size_t(j) * spec.n + i]) continue;
            any = true;
            const Vec2 p = spec.node(i, j);
            const double e = std::abs(u(i, j) - analytic(p.x, p.y));
            norms.linf = std::max(norms.linf, e);
            sq += (long double)(e) * e;
        }
    if (!any) throw EmptyRegion("error_norms: region has no cells");
    norms.l2 = double(std::sqrt((long double)(spec.dx()) * spec.dx() * sq));
    return norms;
}

}  // namespace ibdl
