#pragma once

#include <cmath>
#include <numbers>

#include "ibdl/fft.hpp"
#include "ibdl/grid.hpp"

// Discrete Helmholtz operator L = Delta_d - k^2 I on the periodic grid and
// its FFT-based inverse, plus the matching divergence. The inverse always
// divides by the symbol of the *chosen* discrete operator, so apply/invert
// round-trip exactly for either discretization.

namespace ibdl {

namespace detail {

/// Eigenvalue of the 1-D discrete Laplacian for integer mode m.
inline double laplacian_symbol_1d(int m, int n, double box_length, Discretization d) {
    const double dx = box_length / n;
    if (d == Discretization::FiniteDifference) {
        // 5-point stencil symbol: (2 cos(2 pi m / N) - 2) / dx^2
        return (2.0 * std::cos(2.0 * std::numbers::pi * m / n) - 2.0) / (dx * dx);
    }
    const double kw = 2.0 * std::numbers::pi * signed_freq(m, n) / box_length;
    return -kw * kw;
}

}  // namespace detail

/// (Delta_d - k^2 I) u.
inline ScalarField helmholtz_apply(const ScalarField& u, double k, Discretization d) {
    const GridSpec& spec = u.spec;
    const int n = spec.n;
    if (d == Discretization::FiniteDifference) {
        ScalarField out(spec);
        const double inv_dx2 = 1.0 / (spec.dx() * spec.dx());
        for (int j = 0; j < n; ++j) {
            const int jm = spec.wrap(j - 1), jp = spec.wrap(j + 1);
            for (int i = 0; i < n; ++i) {
                const int im = spec.wrap(i - 1), ip = spec.wrap(i + 1);
                const double lap = (u(ip, j) + u(im, j) + u(i, jp) + u(i, jm) - 4.0 * u(i, j)) * inv_dx2;
                out(i, j) = lap - k * k * u(i, j);
            }
        }
        return out;
    }
    auto hat = detail::fft_forward(u);
    const int nx = n / 2 + 1;
    for (int j = 0; j < n; ++j) {
        const double ly = detail::laplacian_symbol_1d(j, n, spec.box_length, d);
        for (int i = 0; i < nx; ++i) {
            const double lx = detail::laplacian_symbol_1d(i, n, spec.box_length, d);
            hat[size_t(j) * nx + i] *= (lx + ly - k * k);
        }
    }
    return detail::fft_inverse(spec, hat);
}

/// Solve (Delta_d - k^2 I) u = rhs. For k = 0 the operator is singular on the
/// periodic box: rhs must have (numerically) zero mean and the zero mode of
/// the solution is pinned to 0, i.e. the mean-zero representative is returned.
inline ScalarField helmholtz_invert(const ScalarField& rhs, double k, Discretization d) {
    const GridSpec& spec = rhs.spec;
    const int n = spec.n;
    if (k == 0.0) {
        const double mean = std::abs(rhs.mean());
        const double scale = std::max(rhs.max_abs(), 1e-300);
        if (mean > 1e-8 * scale)
            throw NonZeroMeanForSingularOperator(
                "helmholtz_invert: k=0 but |mean(rhs)| = " + std::to_string(mean));
    }
    auto hat = detail::fft_forward(rhs);
    const int nx = n / 2 + 1;
    for (int j = 0; j < n; ++j) {
        const double ly = detail::laplacian_symbol_1d(j, n, spec.box_length, d);
        for (int i = 0; i < nx; ++i) {
            const double sym = detail::laplacian_symbol_1d(i, n, spec.box_length, d) + ly - k * k;
            auto& c = hat[size_t(j) * nx + i];
            if (i == 0 && j == 0 && k == 0.0)
                c = 0.0;  // pin the zero mode: mean-zero solution
            else
                c /= sym;
        }
    }
    return detail::fft_inverse(spec, hat);
}

/// d(v.x)/dx + d(v.y)/dy with the discretization matching the PDE solver:
/// second-order centered differences or spectral derivative (Nyquist mode of
/// the odd derivative zeroed to keep the result real).
inline ScalarField divergence(const VectorField& v, Discretization d) {
    const GridSpec& spec = v.x.spec;
    if (!(v.y.spec == spec)) throw Error("divergence: component grids differ");
    const int n = spec.n;
    if (d == Discretization::FiniteDifference) {
        ScalarField out(spec);
        const double inv_2dx = 1.0 / (2.0 * spec.dx());
        for (int j = 0; j < n; ++j) {
            const int jm = spec.wrap(j - 1), jp = spec.wrap(j + 1);
            for (int i = 0; i < n; ++i) {
                const int im = spec.wrap(i - 1), ip = spec.wrap(i + 1);
                out(i, j) = (v.x(ip, j) - v.x(im, j)) * inv_2dx + (v.y(i, jp) - v.y(i, jm)) * inv_2dx;
            }
        }
        return out;
    }
    auto hx = detail::fft_forward(v.x);
    auto hy = detail::fft_forward(v.y);
    const int nx = n / 2 + 1;
    const double two_pi_over_l = 2.0 * std::numbers::pi / spec.box_length;
    for (int j = 0; j < n; ++j) {
        int my = detail::signed_freq(j, n);
        if (2 * j == n) my = 0;
        const std::complex<double> iky{0.0, two_pi_over_l * my};
        for (int i = 0; i < nx; ++i) {
            int mx = i;
            if (2 * i == n) mx = 0;
            const std::complex<double> ikx{0.0, two_pi_over_l * mx};
            const size_t idx = size_t(j) * nx + i;
            hx[idx] = ikx * hx[idx] + iky * hy[idx];
        }
    }
    return detail::fft_inverse(spec, hx);
}

}  // namespace ibdl
