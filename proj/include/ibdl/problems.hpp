#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ibdl/bem.hpp"
#include "ibdl/boundary.hpp"
#include "ibdl/curves.hpp"
#include "ibdl/solvers.hpp"

// The paper-style test problems, one per experiment family. Each definition
// carries the geometry, PDE data as callables, and the closed-form solution;
// building a concrete ProblemSpec for a grid size happens in the runner.

namespace ibdl {

struct ProblemDef {
    std::string id;
    double box_length = 1.0;
    Vec2 origin{-0.5, -0.5};
    double k = 1.0;
    ParametricCurve curve;
    Orientation orientation = Orientation::InteriorDomain;
    bool neumann = false;
    std::function<double(double, double)> rhs;             // g on Omega; empty means 0
    std::function<double(Vec2)> boundary_data;             // U_b (Dirichlet) or V_b (Neumann)
    std::function<double(double, double)> analytic;
};

inline ProblemDef get_problem(const std::string& id) {
    ProblemDef def;
    def.id = id;
    if (id == "helmholtz_circle_sin2theta") {
        def.curve = circle({0.0, 0.0}, 0.25);
        def.boundary_data = [](Vec2 p) {
            const double r2 = p.x * p.x + p.y * p.y;
            return 2.0 * p.x * p.y / r2;  // sin 2 theta
        };
        def.analytic = analytic_solution(id);
        return def;
    }
    if (id == "helmholtz_linear") {
        def.curve = circle({0.0, 0.0}, 0.25);
        def.rhs = [](double x, double y) { return -(x + y); };
        def.boundary_data = [](Vec2 p) { return p.x + p.y; };
        def.analytic = analytic_solution(id);
        return def;
    }
    if (id == "poisson_starfish") {
        def.box_length = 4.0;
        def.origin = {-2.0, -2.0};
        def.k = 0.0;
        def.curve = starfish();
        def.orientation = Orientation::ExteriorDomain;
        def.rhs = [](double x, double y) {
            const double p = std::numbers::pi;
            return p * p / 4.0 * (std::cos(p * y / 2.0) - std::sin(p * x / 2.0));
        };
        def.boundary_data = [](Vec2 p) {
            const double pi = std::numbers::pi;
            return std::sin(pi * p.x / 2.0) - std::cos(pi * p.y / 2.0);
        };
        def.analytic = analytic_solution(id);
        return def;
    }
    if (id == "neumann_circle") {
        def.curve = circle({0.0, 0.0}, 0.25);
        def.neumann = true;
        def.rhs = [](double x, double y) { return -(x * x - y * y); };
        def.boundary_data = [](Vec2 p) { return 8.0 * (p.x * p.x - p.y * p.y); };
        def.analytic = analytic_solution(id);
        return def;
    }
    throw UnknownProblem("get_problem: unknown problem_id '" + id + "'");
}

inline const std::vector<std::string>& problem_ids() {
    static const std::vector<std::string> ids{"helmholtz_circle_sin2theta", "helmholtz_linear",
                                              "poisson_starfish", "neumann_circle"};
    return ids;
}

}  // namespace ibdl
