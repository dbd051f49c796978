#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "test_support.hpp"

using namespace ibdl;
using namespace ibdl::testing;
using Catch::Approx;

namespace {

LinearOperator dense_op(const Eigen::MatrixXd& A) {
    LinearOperator op;
    op.n = int(A.rows());
    op.apply = [A](std::span<const double> v, std::span<double> out) {
        Eigen::Map<const Eigen::VectorXd> x(v.data(), v.size());
        Eigen::Map<Eigen::VectorXd> y(out.data(), out.size());
        y = A * x;
    };
    return op;
}

Eigen::MatrixXd random_matrix(int n, uint32_t seed, bool symmetric) {
    auto gen = rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = dist(gen);
    if (symmetric) A = ((A + A.transpose()) / 2.0).eval();
    // keep it comfortably nonsingular
    for (int i = 0; i < n; ++i) A(i, i) += (A(i, i) >= 0 ? 3.0 : -3.0);
    return A;
}

double true_residual(const Eigen::MatrixXd& A, const std::vector<double>& x,
                     const std::vector<double>& b) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
    return (bv - A * xv).norm() / bv.norm();
}

}  // namespace

TEST_CASE("gmres on the identity converges in one iteration") {
    const int n = 12;
    const auto b = random_vector(n, 41);
    const auto r = gmres(dense_op(Eigen::MatrixXd::Identity(n, n)), b);
    REQUIRE(r.converged);
    REQUIRE(r.iterations == 1);
    REQUIRE(max_abs_diff(r.x, b) < 1e-12);
}

TEST_CASE("zero right-hand side is solved in zero iterations") {
    const Eigen::MatrixXd A = random_matrix(8, 42, false);
    const std::vector<double> b(8, 0.0);
    for (auto* solver : {&gmres, &minres}) {
        const auto r = (*solver)(dense_op(A), b, {});
        REQUIRE(r.converged);
        REQUIRE(r.iterations == 0);
        for (double v : r.x) REQUIRE(v == 0.0);
    }
}

TEST_CASE("gmres matches a dense LU solve") {
    const int n = 20;
    const Eigen::MatrixXd A = random_matrix(n, 43, false);
    const auto b = random_vector(n, 44);
    const auto r = gmres(dense_op(A), b, {1e-10, -1});
    REQUIRE(r.converged);
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
    const Eigen::VectorXd x = A.partialPivLu().solve(bv);
    for (int i = 0; i < n; ++i) REQUIRE(r.x[i] == Approx(x(i)).margin(1e-6));
    REQUIRE(true_residual(A, r.x, b) < 1e-9);
}

TEST_CASE("gmres residuals are non-increasing") {
    const int n = 25;
    const Eigen::MatrixXd A = random_matrix(n, 45, false);
    const auto b = random_vector(n, 46);
    // track residuals by running with increasing iteration caps
    double prev = 1.0;
    for (int cap = 1; cap <= n; ++cap) {
        const auto r = gmres(dense_op(A), b, {1e-300, cap});  // tiny tol: always run `cap` steps
        REQUIRE(r.relative_residual <= prev + 1e-13);
        prev = r.relative_residual;
    }
}

TEST_CASE("minres on 2I halves the data in one iteration") {
    const int n = 10;
    const auto b = random_vector(n, 47);
    const auto r = minres(dense_op(2.0 * Eigen::MatrixXd::Identity(n, n)), b);
    REQUIRE(r.converged);
    REQUIRE(r.iterations == 1);
    for (int i = 0; i < n; ++i) REQUIRE(r.x[i] == Approx(b[i] / 2.0).margin(1e-12));
}

TEST_CASE("minres terminates in at most 3 iterations for 3 distinct eigenvalues") {
    const int n = 15;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = double(1 + i % 3);  // eigenvalues 1, 2, 3
    const auto b = random_vector(n, 48);
    const auto r = minres(dense_op(d.asDiagonal()), b, {1e-10, -1});
    REQUIRE(r.converged);
    REQUIRE(r.iterations <= 3);
}

TEST_CASE("minres matches a dense solve on a symmetric indefinite system") {
    const int n = 30;
    Eigen::MatrixXd A = random_matrix(n, 49, true);
    A -= 4.5 * Eigen::MatrixXd::Identity(n, n);  // push some eigenvalues negative
    const auto b = random_vector(n, 50);
    const auto r = minres(dense_op(A), b, {1e-10, -1});
    REQUIRE(r.converged);
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), n);
    const Eigen::VectorXd x = A.partialPivLu().solve(bv);
    for (int i = 0; i < n; ++i) REQUIRE(r.x[i] == Approx(x(i)).margin(1e-6));
}

TEST_CASE("finite termination within n iterations") {
    const int n = 50;
    const Eigen::MatrixXd G = random_matrix(n, 51, false);
    const Eigen::MatrixXd S = random_matrix(n, 52, true);
    const auto b = random_vector(n, 53);
    const auto rg = gmres(dense_op(G), b, {1e-10, n});
    REQUIRE(rg.converged);
    REQUIRE(rg.iterations <= n);
    const auto rm = minres(dense_op(S), b, {1e-10, 20 * n});
    REQUIRE(rm.converged);
    REQUIRE(rm.iterations <= n);
}

TEST_CASE("identical inputs give bitwise-identical results") {
    const int n = 24;
    const Eigen::MatrixXd A = random_matrix(n, 54, true);
    const auto b = random_vector(n, 55);
    const auto r1 = minres(dense_op(A), b);
    const auto r2 = minres(dense_op(A), b);
    REQUIRE(r1.iterations == r2.iterations);
    REQUIRE(std::equal(r1.x.begin(), r1.x.end(), r2.x.begin()));
    const auto g1 = gmres(dense_op(A), b);
    const auto g2 = gmres(dense_op(A), b);
    REQUIRE(g1.iterations == g2.iterations);
    REQUIRE(std::equal(g1.x.begin(), g1.x.end(), g2.x.begin()));
}

TEST_CASE("unconverged solves return the best iterate with converged=false") {
    const int n = 40;
    const Eigen::MatrixXd A = random_matrix(n, 56, true);
    const auto b = random_vector(n, 57);
    const auto r = minres(dense_op(A), b, {1e-14, 2});
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.iterations == 2);
    REQUIRE(r.relative_residual > 0.0);
}
