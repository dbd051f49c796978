#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ibdl/problems.hpp"

// End-to-end pipeline for one (problem, method, grid size) cell:
// flag the interior, extend the right-hand side, run the Schur solve,
// replace near-boundary values, and measure norms against the closed form.

namespace ibdl {

struct RunConfig {
    std::string problem_id;
    Method method = Method::IBDL;
    Discretization discretization = Discretization::FiniteDifference;
    int n = 64;
    double ratio = 0.75;  // target ds / dx
    int m1 = -1;          // -1: FD default 6, spectral default 2(log2 N - 4)
    int m2 = -1;          // -1: m1 + 2
    double tol = 1e-8;
    int max_iterations = -1;
    bool interpolation = true;
    NormalsMode normals = NormalsMode::UseExactIfAvailable;
    double box_length_override = 0.0;  // 0: problem default (e.g. 20 for the strength study)
};

struct RunResult {
    SolveReport report;
    ScalarField solution;  // post-interpolation when enabled, else the raw field
    InteriorMask mask;
    BandMask band;
    ErrorNorms norms;      // over the Omega-side mask (minus band when interpolation is off)
    int n = 0;
    int n_ib = 0;
    int m1 = 0;
    int m2 = 0;
    double ds = 0.0;
    double seconds_total = 0.0;
};

inline int default_m1(Discretization d, int n) {
    if (d == Discretization::FiniteDifference) return 6;
    const int l = int(std::lround(std::log2(double(n))));
    return std::max(2, 2 * (l - 4));
}

inline RunResult run_experiment(const RunConfig& cfg) {
    const ProblemDef def = get_problem(cfg.problem_id);
    detail::Timer timer;

    RunResult out;
    out.n = cfg.n;
    out.m1 = cfg.m1 >= 0 ? cfg.m1 : default_m1(cfg.discretization, cfg.n);
    out.m2 = cfg.m2 >= 0 ? cfg.m2 : out.m1 + 2;

    const double box = cfg.box_length_override > 0.0 ? cfg.box_length_override : def.box_length;
    const Vec2 origin = cfg.box_length_override > 0.0 ? Vec2{-box / 2.0, -box / 2.0} : def.origin;
    const GridSpec grid(box, cfg.n, origin);

    ProblemSpec prob;
    prob.grid = grid;
    prob.k = def.k;
    prob.discretization = cfg.discretization;
    prob.krylov.tol = cfg.tol;
    prob.krylov.max_iterations = cfg.max_iterations;
    prob.boundary = discretize_curve(def.curve, cfg.ratio * grid.dx(), def.orientation, cfg.normals);
    out.n_ib = prob.boundary.size();
    out.ds = prob.boundary.ds.front();

    out.mask = flag_interior(prob.boundary, grid, cfg.discretization);

    // right-hand side on the box: zero extension for k > 0, solvability
    // extension for the Poisson case
    ScalarField g(grid);
    if (def.rhs) {
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i) {
                const Vec2 p = grid.node(i, j);
                if (out.mask.in_domain(i, j)) g(i, j) = def.rhs(p.x, p.y);
            }
        if (def.k == 0.0) g = extend_rhs_poisson(g, out.mask);
    }
    prob.rhs = g;

    BoundaryDensity data(prob.boundary.size());
    for (int i = 0; i < prob.boundary.size(); ++i) data[i] = def.boundary_data(prob.boundary.points[i]);

    if (def.neumann) {
        prob.bc = NeumannBC{data};
        out.report = solve_ibdl_neumann(prob);
    } else {
        prob.bc = DirichletBC{data};
        out.report = cfg.method == Method::IBSL ? solve_ibsl_dirichlet(prob)
                                                : solve_ibdl_dirichlet(prob);
    }

    out.band = flag_band(prob.boundary, out.mask, out.m1);
    if (cfg.interpolation) {
        // Dirichlet interpolates with the known boundary values; Neumann with
        // the solver-recovered ones
        const BoundaryDensity& bvals = def.neumann ? out.report.density : data;
        NearBoundaryStats stats;
        out.solution = interpolate_near_boundary(out.report.solution, prob.boundary, bvals,
                                                 out.band, out.mask, out.m2, &stats);
        out.report.near_boundary_fallbacks = stats.fallback_count;
    } else {
        out.solution = out.report.solution;
    }

    if (def.analytic) {
        std::vector<uint8_t> region = out.mask.domain_flags();
        if (!cfg.interpolation) {
            for (size_t t = 0; t < region.size(); ++t)
                if (out.band.flags[t]) region[t] = 0;
        }
        out.norms = error_norms(out.solution, def.analytic, region);
    }
    out.seconds_total = timer.seconds();
    return out;
}

/// Least-squares slope of log2(err) vs log2(n) over the last `window` sizes
/// (the convention refinement plots are read with); returns the positive
/// order estimate.
inline double fitted_slope(const std::vector<int>& ns, const std::vector<double>& errs,
                           int window = 4) {
    const int total = int(ns.size());
    const int m = std::min(window, total);
    const int off = total - m;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int t = 0; t < m; ++t) {
        const double x = std::log2(double(ns[off + t]));
        const double y = std::log2(errs[off + t]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

}  // namespace ibdl
