#pragma once

#include <cmath>
#include <vector>

#include "ibdl/boundary.hpp"
#include "ibdl/grid.hpp"
#include "ibdl/operators.hpp"

// Eulerian-Lagrangian coupling through the Peskin 4-point kernel:
// delta_h(x) = phi(x/h) phi(y/h) / h^2 with h = dx. Spread S deposits a
// boundary density onto the grid, interpolation S* samples a field at the
// boundary points; they are exact discrete adjoints,
//   <S q, u>_C dx^2 = sum_i q_i (S* u)_i ds_i.

namespace ibdl {

using BoundaryDensity = std::vector<double>;

/// Peskin 4-point kernel. Square-root arguments are clamped at 0: near the
/// branch points |r|=1, 2 round-off can push them to -1e-17.
inline double phi4(double r) {
    const double a = std::abs(r);
    if (a >= 2.0) return 0.0;
    if (a <= 1.0) return (3.0 - 2.0 * a + std::sqrt(std::max(0.0, 1.0 + 4.0 * a - 4.0 * a * a))) / 8.0;
    return (5.0 - 2.0 * a - std::sqrt(std::max(0.0, -7.0 + 12.0 * a - 4.0 * a * a))) / 8.0;
}

namespace detail {

/// 4x4 support patch of one boundary point: wrapped grid indices and the
/// phi weights in each direction.
struct KernelPatch {
    int ix[4];
    int iy[4];
    double wx[4];
    double wy[4];
};

inline KernelPatch kernel_patch(const GridSpec& spec, Vec2 p) {
    KernelPatch patch;
    const double gx = (p.x - spec.origin.x) / spec.dx();
    const double gy = (p.y - spec.origin.y) / spec.dx();
    const int ix0 = int(std::floor(gx)) - 1;
    const int iy0 = int(std::floor(gy)) - 1;
    for (int t = 0; t < 4; ++t) {
        patch.ix[t] = spec.wrap(ix0 + t);
        patch.iy[t] = spec.wrap(iy0 + t);
        patch.wx[t] = phi4(gx - (ix0 + t));
        patch.wy[t] = phi4(gy - (iy0 + t));
    }
    return patch;
}

}  // namespace detail

/// S q: each point deposits q_i ds_i delta_h(x - X_i) onto its 4x4 patch.
inline ScalarField spread(const ImmersedBoundary& ib, const BoundaryDensity& q, const GridSpec& spec) {
    if (int(q.size()) != ib.size()) throw Error("spread: density length != boundary size");
    ScalarField f(spec);
    const double inv_h2 = 1.0 / (spec.dx() * spec.dx());
    for (int p = 0; p < ib.size(); ++p) {
        const auto patch = detail::kernel_patch(spec, ib.points[p]);
        const double w = q[p] * ib.ds[p] * inv_h2;
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a)
                f(patch.ix[a], patch.iy[b]) += w * patch.wx[a] * patch.wy[b];
    }
    return f;
}

/// S* u: (S* u)_i = sum_x u(x) delta_h(x - X_i) dx dy. The h^2 of the kernel
/// and the dx dy quadrature weight cancel, leaving the raw phi weights.
inline BoundaryDensity interpolate(const ScalarField& u, const ImmersedBoundary& ib) {
    BoundaryDensity out(ib.size());
    for (int p = 0; p < ib.size(); ++p) {
        const auto patch = detail::kernel_patch(u.spec, ib.points[p]);
        double acc = 0.0;
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a)
                acc += u(patch.ix[a], patch.iy[b]) * patch.wx[a] * patch.wy[b];
        out[p] = acc;
    }
    return out;
}

/// S~ q = div(S(q n)): dipole spread. The divergence uses the same
/// discretization as the PDE solve.
inline ScalarField spread_dipole(const ImmersedBoundary& ib, const BoundaryDensity& q,
                                 const GridSpec& spec, Discretization d) {
    if (ib.normals.empty()) throw Error("spread_dipole: boundary has no normals");
    BoundaryDensity qx(ib.size()), qy(ib.size());
    for (int i = 0; i < ib.size(); ++i) {
        qx[i] = q[i] * ib.normals[i].x;
        qy[i] = q[i] * ib.normals[i].y;
    }
    VectorField v;
    v.x = spread(ib, qx, spec);
    v.y = spread(ib, qy, spec);
    return divergence(v, d);
}

}  // namespace ibdl
