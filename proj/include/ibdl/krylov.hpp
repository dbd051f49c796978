#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "ibdl/errors.hpp"

// Matrix-free Krylov solvers. Both methods start from a zero initial guess,
// stop on the relative residual ||b - A x|| / ||b|| <= tol, and report the
// iteration count as the number of Arnoldi/Lanczos steps. The residual is
// the standard rotation-recurrence estimate (the quantity the usual minres/
// gmres routines drive below tol); for near-singular systems the true
// residual can stagnate above it, which is inherent to the methods.

namespace ibdl {

struct LinearOperator {
    int n = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;

    std::vector<double> operator()(std::span<const double> v) const {
        std::vector<double> out(n);
        apply(v, out);
        return out;
    }
};

struct KrylovConfig {
    double tol = 1e-8;
    int max_iterations = -1;  // -1: 20 n
};

struct KrylovResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

namespace detail {

inline double nrm2(std::span<const double> v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
}

inline double dot_v(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Full (unrestarted) GMRES: Arnoldi with modified Gram-Schmidt and Givens
/// rotations. Happy breakdown counts as convergence.
inline KrylovResult gmres(const LinearOperator& A, std::span<const double> b, KrylovConfig cfg = {}) {
    if (cfg.tol <= 0.0) throw Error("gmres: tolerance must be > 0");
    const int n = A.n;
    const int maxit = cfg.max_iterations > 0 ? cfg.max_iterations : 20 * n;
    KrylovResult res;
    res.x.assign(n, 0.0);
    const double nb = detail::nrm2(b);
    if (nb == 0.0) {
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> V;
    V.emplace_back(b.begin(), b.end());
    for (double& v : V[0]) v /= nb;

    std::vector<std::vector<double>> H;  // H[j] holds column j (rotated), length j+1
    std::vector<double> cs, sn, g{nb};
    int m = 0;
    bool breakdown = false;

    for (int j = 0; j < maxit; ++j) {
        std::vector<double> w = A(V[j]);
        std::vector<double> h(j + 2, 0.0);
        for (int i = 0; i <= j; ++i) {
            h[i] = detail::dot_v(w, V[i]);
            for (int t = 0; t < n; ++t) w[t] -= h[i] * V[i][t];
        }
        h[j + 1] = detail::nrm2(w);
        const double h_new = h[j + 1];

        for (int i = 0; i < j; ++i) {
            const double tmp = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = tmp;
        }
        const double denom = std::hypot(h[j], h[j + 1]);
        const double c = denom > 0.0 ? h[j] / denom : 1.0;
        const double s = denom > 0.0 ? h[j + 1] / denom : 0.0;
        cs.push_back(c);
        sn.push_back(s);
        h[j] = denom;
        h.pop_back();
        H.push_back(std::move(h));
        g.push_back(-s * g[j]);
        g[j] = c * g[j];
        m = j + 1;

        res.relative_residual = std::abs(g[m]) / nb;
        if (res.relative_residual <= cfg.tol) {
            res.converged = true;
            break;
        }
        if (h_new == 0.0) {  // happy breakdown: Krylov space is invariant
            breakdown = true;
            res.converged = true;
            break;
        }
        if (j + 1 < maxit) {
            std::vector<double> vn(std::move(w));
            for (double& v : vn) v /= h_new;
            V.push_back(std::move(vn));
        }
    }
    (void)breakdown;

    // back-substitute the least-squares system and assemble x
    std::vector<double> y(m, 0.0);
    for (int i = m - 1; i >= 0; --i) {
        double acc = g[i];
        for (int t = i + 1; t < m; ++t) acc -= H[t][i] * y[t];
        y[i] = acc / H[i][i];
    }
    for (int i = 0; i < m; ++i)
        for (int t = 0; t < n; ++t) res.x[t] += y[i] * V[i][t];
    res.iterations = m;
    return res;
}

/// MINRES (Paige-Saunders) for symmetric, possibly indefinite operators.
inline KrylovResult minres(const LinearOperator& A, std::span<const double> b, KrylovConfig cfg = {}) {
    if (cfg.tol <= 0.0) throw Error("minres: tolerance must be > 0");
    const int n = A.n;
    const int maxit = cfg.max_iterations > 0 ? cfg.max_iterations : 20 * n;
    KrylovResult res;
    res.x.assign(n, 0.0);
    const double nb = detail::nrm2(b);
    if (nb == 0.0) {
        res.converged = true;
        return res;
    }

    std::vector<double> v_old(n, 0.0);
    std::vector<double> v(b.begin(), b.end());
    for (double& a : v) a /= nb;
    double beta = nb;
    double c = 1.0, s = 0.0, c_old = 1.0, s_old = 0.0;
    std::vector<double> w(n, 0.0), w_old(n, 0.0);
    double phi_bar = nb;

    for (int it = 1; it <= maxit; ++it) {
        std::vector<double> z = A(v);
        const double alpha = detail::dot_v(v, z);
        for (int t = 0; t < n; ++t) z[t] -= alpha * v[t] + beta * v_old[t];
        const double beta_new = detail::nrm2(z);

        // apply the two previous rotations, then form the new one
        const double delta = c * alpha - c_old * s * beta;
        const double rho2 = s * alpha + c_old * c * beta;
        const double rho3 = s_old * beta;
        const double rho1 = std::hypot(delta, beta_new);
        const double c_new = rho1 > 0.0 ? delta / rho1 : 1.0;
        const double s_new = rho1 > 0.0 ? beta_new / rho1 : 0.0;
        const double phi = c_new * phi_bar;
        phi_bar = s_new * phi_bar;

        for (int t = 0; t < n; ++t) {
            const double wn = (v[t] - rho2 * w[t] - rho3 * w_old[t]) / rho1;
            res.x[t] += phi * wn;
            w_old[t] = w[t];
            w[t] = wn;
        }

        v_old.swap(v);
        v.swap(z);  // v now holds the un-normalized new Lanczos vector
        if (beta_new > 0.0)
            for (double& a : v) a /= beta_new;
        c_old = c;
        s_old = s;
        c = c_new;
        s = s_new;
        beta = beta_new;

        res.iterations = it;
        res.relative_residual = std::abs(phi_bar) / nb;
        if (res.relative_residual <= cfg.tol || beta_new == 0.0) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace ibdl
