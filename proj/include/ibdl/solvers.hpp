#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "ibdl/coupling.hpp"
#include "ibdl/krylov.hpp"
#include "ibdl/postprocess.hpp"

// The constraint (IBSL) and double layer (IBDL) solvers as matrix-free
// Schur-complement solves on the boundary density:
//   IBSL:     -(S* L^-1 S) F = U_b - S* L^-1 g,        then L u = g - S F
//   IBDL:     (-S* L^-1 S~ + 1/2 I) Q = U_b - S* L^-1 g, then L u = g - S~ Q
//   Neumann:  (-S* L^-1 S~ - 1/2 I) U_b = S* L^-1 (S V_b - g),
//                                         then L u = g - S~ U_b - S V_b
// The +-1/2 enters as one signed coefficient; it assumes arclength-equal
// boundary spacing.

namespace ibdl {

enum class Method { IBSL, IBDL };

struct DirichletBC {
    BoundaryDensity values;  // U_b at the boundary points
};

struct NeumannBC {
    BoundaryDensity normal_derivatives;  // V_b at the boundary points
};

struct ProblemSpec {
    GridSpec grid;
    ImmersedBoundary boundary;
    double k = 1.0;
    ScalarField rhs;  // g_e on the full computational box (already extended)
    std::variant<DirichletBC, NeumannBC> bc;
    Discretization discretization = Discretization::FiniteDifference;
    KrylovConfig krylov;
};

struct SolveReport {
    ScalarField solution;     // raw field on C, pre near-boundary interpolation
    BoundaryDensity density;  // F (IBSL), Q (IBDL) or recovered U_b (Neumann)
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    double seconds = 0.0;
    int near_boundary_fallbacks = 0;  // filled by the interpolation step
    std::vector<std::string> warnings;
};

/// v -> -(S* L^-1 S) v. Symmetric (S and S* are adjoint, L^-1 self-adjoint).
inline LinearOperator schur_operator_ibsl(const GridSpec& grid, const ImmersedBoundary& ib,
                                          double k, Discretization d) {
    LinearOperator op;
    op.n = ib.size();
    op.apply = [grid, ib, k, d](std::span<const double> v, std::span<double> out) {
        BoundaryDensity q(v.begin(), v.end());
        const ScalarField field = helmholtz_invert(spread(ib, q, grid), k, d);
        const BoundaryDensity s = interpolate(field, ib);
        for (size_t i = 0; i < s.size(); ++i) out[i] = -s[i];
    };
    return op;
}

/// v -> -(S* L^-1 S~) v + half_coeff v; half_coeff = +1/2 for the Dirichlet
/// double layer equation, -1/2 for the Neumann one.
inline LinearOperator schur_operator_ibdl(const GridSpec& grid, const ImmersedBoundary& ib,
                                          double k, Discretization d, double half_coeff = 0.5) {
    LinearOperator op;
    op.n = ib.size();
    op.apply = [grid, ib, k, d, half_coeff](std::span<const double> v, std::span<double> out) {
        BoundaryDensity q(v.begin(), v.end());
        const ScalarField field = helmholtz_invert(spread_dipole(ib, q, grid, d), k, d);
        const BoundaryDensity s = interpolate(field, ib);
        for (size_t i = 0; i < s.size(); ++i) out[i] = -s[i] + half_coeff * v[i];
    };
    return op;
}

/// Materialize a matrix-free operator column by column (debug / spectrum
/// studies; intended for N_IB <= 512).
inline std::vector<std::vector<double>> assemble_dense(const LinearOperator& op) {
    if (op.n > 512) throw Error("assemble_dense: operator too large (n > 512)");
    std::vector<std::vector<double>> cols(op.n);
    std::vector<double> e(op.n, 0.0);
    for (int j = 0; j < op.n; ++j) {
        e[j] = 1.0;
        cols[j] = op(e);
        e[j] = 0.0;
    }
    return cols;  // cols[j][i] = A_ij
}

namespace detail {

inline void warn_nonuniform_spacing(const ImmersedBoundary& ib, SolveReport& report) {
    double mean = 0.0;
    for (double s : ib.ds) mean += s;
    mean /= ib.size();
    double dev = 0.0;
    for (double s : ib.ds) dev = std::max(dev, std::abs(s - mean));
    if (dev > 1e-6 * mean)
        report.warnings.push_back(
            "boundary spacing is not arclength-uniform; the 1/2 coefficient assumes |dX/ds|=1");
}

inline BoundaryDensity interp_inverse(const ScalarField& f, const ImmersedBoundary& ib, double k,
                                      Discretization d) {
    return interpolate(helmholtz_invert(f, k, d), ib);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

}  // namespace detail

/// Constraint-method baseline (MINRES on the symmetric first-kind operator).
inline SolveReport solve_ibsl_dirichlet(const ProblemSpec& p) {
    if (p.k <= 0.0) throw Error("solve_ibsl_dirichlet: requires k > 0");
    const auto* bc = std::get_if<DirichletBC>(&p.bc);
    if (!bc) throw Error("solve_ibsl_dirichlet: Dirichlet boundary data required");

    detail::Timer timer;
    SolveReport report;

    BoundaryDensity b = bc->values;
    if (p.rhs.max_abs() > 0.0) {
        const BoundaryDensity shift = detail::interp_inverse(p.rhs, p.boundary, p.k, p.discretization);
        for (size_t i = 0; i < b.size(); ++i) b[i] -= shift[i];
    }

    const LinearOperator A = schur_operator_ibsl(p.grid, p.boundary, p.k, p.discretization);
    const KrylovResult kr = minres(A, b, p.krylov);

    ScalarField forcing = spread(p.boundary, kr.x, p.grid);
    for (size_t t = 0; t < forcing.values.size(); ++t)
        forcing.values[t] = p.rhs.values.empty() ? -forcing.values[t]
                                                 : p.rhs.values[t] - forcing.values[t];
    report.solution = helmholtz_invert(forcing, p.k, p.discretization);
    report.density = kr.x;
    report.iterations = kr.iterations;
    report.residual = kr.relative_residual;
    report.converged = kr.converged;
    report.seconds = timer.seconds();
    return report;
}

/// Double layer solve (GMRES on the shifted second-kind operator).
inline SolveReport solve_ibdl_dirichlet(const ProblemSpec& p) {
    const auto* bc = std::get_if<DirichletBC>(&p.bc);
    if (!bc) throw Error("solve_ibdl_dirichlet: Dirichlet boundary data required");
    if (p.k == 0.0 && !p.rhs.values.empty()) {
        const double mean = std::abs(p.rhs.mean());
        if (mean > 1e-8 * std::max(p.rhs.max_abs(), 1e-300))
            throw SolvabilityViolated("solve_ibdl_dirichlet: k=0 with nonzero-mean rhs; apply extend_rhs_poisson");
    }

    detail::Timer timer;
    SolveReport report;
    detail::warn_nonuniform_spacing(p.boundary, report);

    BoundaryDensity b = bc->values;
    if (p.rhs.max_abs() > 0.0) {
        const BoundaryDensity shift = detail::interp_inverse(p.rhs, p.boundary, p.k, p.discretization);
        for (size_t i = 0; i < b.size(); ++i) b[i] -= shift[i];
    }

    const LinearOperator A = schur_operator_ibdl(p.grid, p.boundary, p.k, p.discretization, 0.5);
    const KrylovResult kr = gmres(A, b, p.krylov);

    ScalarField forcing = spread_dipole(p.boundary, kr.x, p.grid, p.discretization);
    for (size_t t = 0; t < forcing.values.size(); ++t)
        forcing.values[t] = p.rhs.values.empty() ? -forcing.values[t]
                                                 : p.rhs.values[t] - forcing.values[t];
    report.solution = helmholtz_invert(forcing, p.k, p.discretization);
    report.density = kr.x;
    report.iterations = kr.iterations;
    report.residual = kr.relative_residual;
    report.converged = kr.converged;
    report.seconds = timer.seconds();
    return report;
}

/// Neumann variant: solves for the unknown boundary values U_b.
inline SolveReport solve_ibdl_neumann(const ProblemSpec& p) {
    if (p.k <= 0.0) throw Error("solve_ibdl_neumann: requires k > 0");
    const auto* bc = std::get_if<NeumannBC>(&p.bc);
    if (!bc) throw Error("solve_ibdl_neumann: Neumann boundary data required");

    detail::Timer timer;
    SolveReport report;
    detail::warn_nonuniform_spacing(p.boundary, report);

    // b = S* L^-1 (S V_b - g)
    ScalarField single = spread(p.boundary, bc->normal_derivatives, p.grid);
    ScalarField combined = single;
    if (!p.rhs.values.empty())
        for (size_t t = 0; t < combined.values.size(); ++t) combined.values[t] -= p.rhs.values[t];
    const BoundaryDensity b = detail::interp_inverse(combined, p.boundary, p.k, p.discretization);

    const LinearOperator A = schur_operator_ibdl(p.grid, p.boundary, p.k, p.discretization, -0.5);
    const KrylovResult kr = gmres(A, b, p.krylov);

    ScalarField forcing = spread_dipole(p.boundary, kr.x, p.grid, p.discretization);
    for (size_t t = 0; t < forcing.values.size(); ++t) {
        const double g = p.rhs.values.empty() ? 0.0 : p.rhs.values[t];
        forcing.values[t] = g - forcing.values[t] - single.values[t];
    }
    report.solution = helmholtz_invert(forcing, p.k, p.discretization);
    report.density = kr.x;  // recovered boundary values U_b
    report.iterations = kr.iterations;
    report.residual = kr.relative_residual;
    report.converged = kr.converged;
    report.seconds = timer.seconds();
    return report;
}

/// Zero-mean extension of g for the periodic Poisson problem:
/// g_e = g on Omega, g~ = -(1/|C \ Omega|) integral_Omega g elsewhere.
inline ScalarField extend_rhs_poisson(const ScalarField& g, const InteriorMask& mask) {
    if (!(g.spec == mask.spec)) throw Error("extend_rhs_poisson: grid mismatch");
    const int n = g.spec.n;
    long double sum_omega = 0.0L;
    long long count_comp = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (mask.in_domain(i, j))
                sum_omega += g(i, j);
            else
                ++count_comp;
        }
    if (count_comp == 0) throw EmptyComplement("extend_rhs_poisson: mask covers the whole box");
    const double g_tilde = double(-sum_omega / count_comp);
    ScalarField out(g.spec);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out(i, j) = mask.in_domain(i, j) ? g(i, j) : g_tilde;
    return out;
}

}  // namespace ibdl
