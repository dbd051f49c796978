#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ibdl/curves.hpp"
#include "ibdl/errors.hpp"
#include "ibdl/grid.hpp"

// Reference implementations independent of the grid solvers: free-space
// Green's function boundary element method (midpoint collocation on uniform
// straight elements, Gauss-Legendre quadrature) and the closed-form analytic
// solutions of the built-in test problems.

namespace ibdl {

/// First-kind modified Bessel function I_n, n in 0..2, x >= 0.
inline double bessel_I(int n, double x) {
    if (n < 0 || n > 2) throw DomainError("bessel_I: order must be 0..2");
    if (x < 0.0) throw DomainError("bessel_I: x must be >= 0");
    return std::cyl_bessel_i(double(n), x);
}

/// Second-kind modified Bessel function K_n, n in 0..2, x > 0.
inline double bessel_K(int n, double x) {
    if (n < 0 || n > 2) throw DomainError("bessel_K: order must be 0..2");
    if (x <= 0.0) throw DomainError("bessel_K: x must be > 0");
    return std::cyl_bessel_k(double(n), x);
}

/// Free-space Green's function of Delta - k^2: G(x,x0) = K_0(k|x-x0|)/(2 pi).
inline double green_modified_helmholtz(Vec2 x, Vec2 x0, double k) {
    const double r = norm(x - x0);
    if (r == 0.0) throw SingularEvaluation("green_modified_helmholtz: x == x0");
    return bessel_K(0, k * r) / (2.0 * std::numbers::pi);
}

/// Gradient in x: -(k / 2 pi) K_1(k r) (x - x0)/r.
inline Vec2 green_modified_helmholtz_gradient(Vec2 x, Vec2 x0, double k) {
    const Vec2 d = x - x0;
    const double r = norm(d);
    if (r == 0.0) throw SingularEvaluation("green_modified_helmholtz_gradient: x == x0");
    const double f = -k * bessel_K(1, k * r) / (2.0 * std::numbers::pi * r);
    return {f * d.x, f * d.y};
}

/// Straight boundary element with midpoint collocation node.
struct BemElement {
    Vec2 a, b;     // endpoints
    Vec2 mid;      // collocation node
    Vec2 normal;   // unit normal out of the PDE domain
    double length = 0.0;
};

/// Uniform-in-parameter elements with endpoints on the exact curve.
inline std::vector<BemElement> bem_elements(const ParametricCurve& c, int n_elem,
                                            Orientation orientation = Orientation::InteriorDomain) {
    if (n_elem < 16) throw Error("bem_elements: need at least 16 elements");
    std::vector<BemElement> elems(n_elem);
    const double sign = orientation == Orientation::ExteriorDomain ? -1.0 : 1.0;
    for (int j = 0; j < n_elem; ++j) {
        const Vec2 a = c.point(double(j) / n_elem);
        const Vec2 b = c.point(double(j + 1) / n_elem);
        BemElement& e = elems[j];
        e.a = a;
        e.b = b;
        e.mid = 0.5 * (a + b);
        const Vec2 t = b - a;
        e.length = norm(t);
        if (e.length < 1e-14) throw DegenerateCurve("bem_elements: zero-length element");
        e.normal = {sign * t.y / e.length, -sign * t.x / e.length};
    }
    return elems;
}

namespace detail {

// 8-point Gauss-Legendre nodes/weights on [-1,1]
inline constexpr std::array<double, 8> kGaussX = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussW = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace detail

/// First-kind collocation solve for the single layer density sigma:
/// U_b(mid_i) = sum_j integral_j G(x, mid_i) sigma_j dl. The self term splits
/// K_0(kr) = -ln r + smooth; the log integrates analytically over the element.
inline std::vector<double> bem_single_layer(const std::vector<BemElement>& elems,
                                            const std::vector<double>& ub, double k) {
    const int n = int(elems.size());
    if (int(ub.size()) != n) throw Error("bem_single_layer: data length mismatch");
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j) {
        const BemElement& e = elems[j];
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            double acc = 0.0;
            for (int q = 0; q < 8; ++q) {
                const Vec2 x = 0.5 * ((1.0 - detail::kGaussX[q]) * e.a + (1.0 + detail::kGaussX[q]) * e.b);
                acc += detail::kGaussW[q] * 0.5 * e.length * green_modified_helmholtz(x, elems[i].mid, k);
            }
            A(i, j) = acc;
        }
        const double half = 0.5 * e.length;
        double smooth = 0.0;
        for (int q = 0; q < 8; ++q) {
            const double t = half * detail::kGaussX[q];
            smooth += detail::kGaussW[q] * half * (bessel_K(0, k * std::abs(t)) + std::log(std::abs(t)));
        }
        A(j, j) = (e.length * (1.0 - std::log(half)) + smooth) / (2.0 * std::numbers::pi);
    }
    Eigen::Map<const Eigen::VectorXd> rhs(ub.data(), n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SingularSystem("bem_single_layer: dense solve failed");
    return {sol.data(), sol.data() + n};
}

/// Second-kind collocation solve (K_2 - 1/2 I) gamma = U_b for the double
/// layer density. The PV self term vanishes on straight elements since
/// n.(x - x0) = 0 along the element through the node.
inline std::vector<double> bem_double_layer(const std::vector<BemElement>& elems,
                                            const std::vector<double>& ub, double k) {
    const int n = int(elems.size());
    if (int(ub.size()) != n) throw Error("bem_double_layer: data length mismatch");
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j) {
        const BemElement& e = elems[j];
        for (int i = 0; i < n; ++i) {
            if (i == j) {
                A(i, j) = -0.5;
                continue;
            }
            double acc = 0.0;
            for (int q = 0; q < 8; ++q) {
                const Vec2 x = 0.5 * ((1.0 - detail::kGaussX[q]) * e.a + (1.0 + detail::kGaussX[q]) * e.b);
                acc += detail::kGaussW[q] * 0.5 * e.length *
                       dot(green_modified_helmholtz_gradient(x, elems[i].mid, k), e.normal);
            }
            A(i, j) = acc;
        }
    }
    Eigen::Map<const Eigen::VectorXd> rhs(ub.data(), n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SingularSystem("bem_double_layer: dense solve failed");
    return {sol.data(), sol.data() + n};
}

/// Evaluate the single layer representation at an off-boundary point.
inline double eval_single_layer(const std::vector<BemElement>& elems, const std::vector<double>& sigma,
                                Vec2 x0, double k) {
    double acc = 0.0;
    for (size_t j = 0; j < elems.size(); ++j) {
        const BemElement& e = elems[j];
        for (int q = 0; q < 8; ++q) {
            const Vec2 x = 0.5 * ((1.0 - detail::kGaussX[q]) * e.a + (1.0 + detail::kGaussX[q]) * e.b);
            acc += detail::kGaussW[q] * 0.5 * e.length * sigma[j] * green_modified_helmholtz(x, x0, k);
        }
    }
    return acc;
}

/// Evaluate the double layer representation at an off-boundary point.
inline double eval_double_layer(const std::vector<BemElement>& elems, const std::vector<double>& gamma,
                                Vec2 x0, double k) {
    double acc = 0.0;
    for (size_t j = 0; j < elems.size(); ++j) {
        const BemElement& e = elems[j];
        for (int q = 0; q < 8; ++q) {
            const Vec2 x = 0.5 * ((1.0 - detail::kGaussX[q]) * e.a + (1.0 + detail::kGaussX[q]) * e.b);
            acc += detail::kGaussW[q] * 0.5 * e.length * gamma[j] *
                   dot(green_modified_helmholtz_gradient(x, x0, k), e.normal);
        }
    }
    return acc;
}

/// Closed-form solutions of the built-in test problems.
inline std::function<double(double, double)> analytic_solution(const std::string& problem_id) {
    if (problem_id == "helmholtz_circle_sin2theta") {
        const double i2r = bessel_I(2, 0.25);
        return [i2r](double x, double y) {
            const double r2 = x * x + y * y;
            if (r2 < 1e-28) return 0.0;
            const double sin2t = 2.0 * x * y / r2;
            return bessel_I(2, std::sqrt(r2)) * sin2t / i2r;
        };
    }
    if (problem_id == "helmholtz_linear")
        return [](double x, double y) { return x + y; };
    if (problem_id == "poisson_starfish")
        return [](double x, double y) {
            return std::sin(std::numbers::pi * x / 2.0) - std::cos(std::numbers::pi * y / 2.0);
        };
    if (problem_id == "neumann_circle")
        return [](double x, double y) { return x * x - y * y; };
    throw UnknownProblem("analytic_solution: unknown problem_id '" + problem_id + "'");
}

}  // namespace ibdl
