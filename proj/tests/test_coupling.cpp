#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "test_support.hpp"

using namespace ibdl;
using namespace ibdl::testing;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
const GridSpec kBox{1.0, 64, {-0.5, -0.5}};

ImmersedBoundary circle_ib(int n_ib, double radius = 0.25) {
    return discretize_curve(circle({0, 0}, radius), 2.0 * kPi * radius / n_ib,
                            Orientation::InteriorDomain);
}
}  // namespace

TEST_CASE("phi4 branch values") {
    REQUIRE(phi4(0.0) == Approx(0.5));
    REQUIRE(phi4(2.0) == 0.0);
    REQUIRE(phi4(-2.5) == 0.0);
    REQUIRE(phi4(1.0) == Approx(0.25));
    REQUIRE(phi4(std::nextafter(1.0, 0.0)) == Approx(0.25).margin(1e-7));
    REQUIRE(phi4(std::nextafter(1.0, 2.0)) == Approx(0.25).margin(1e-7));
}

TEST_CASE("phi4 partition of unity") {
    for (int s = 0; s < 1000; ++s) {
        const double r = double(s) / 1000.0;
        double sum = 0.0;
        for (int j = -3; j <= 3; ++j) sum += phi4(r - j);
        REQUIRE(sum == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("spread of a single on-node point") {
    ImmersedBoundary ib;
    ib.points = {{0.0, 0.0}, {0.25, 0.0}, {-0.25, 0.0}};  // first point on a grid node
    ib.ds = {1.0, 0.0, 0.0};                              // isolate the first point
    ib.normals = {{1, 0}, {1, 0}, {1, 0}};
    ib.orientation = Orientation::InteriorDomain;
    BoundaryDensity q{1.0, 0.0, 0.0};
    const ScalarField f = spread(ib, q, kBox);
    const double dx = kBox.dx();
    REQUIRE(f(32, 32) == Approx(0.25 / (dx * dx)));     // phi(0)^2 / dx^2
    REQUIRE(f.sum() * dx * dx == Approx(1.0).margin(1e-12));  // kernel partition of unity
}

TEST_CASE("zero density spreads to the zero field") {
    const auto ib = circle_ib(32);
    const ScalarField f = spread(ib, BoundaryDensity(ib.size(), 0.0), kBox);
    for (double v : f.values) REQUIRE(v == 0.0);
}

TEST_CASE("spread and interpolate are adjoint to 1e-12") {
    const auto ib = circle_ib(64);
    const BoundaryDensity q = random_vector(ib.size(), 21);
    const ScalarField u = random_field(kBox, 22);
    const ScalarField sq = spread(ib, q, kBox);
    const BoundaryDensity su = interpolate(u, ib);
    const double lhs = grid_inner(sq, u) * kBox.dx() * kBox.dx();
    double rhs = 0.0;
    for (int i = 0; i < ib.size(); ++i) rhs += q[i] * su[i] * ib.ds[i];
    REQUIRE(lhs == Approx(rhs).epsilon(1e-12));
}

TEST_CASE("interpolation reproduces constants exactly") {
    const auto ib = circle_ib(48);
    ScalarField u(kBox);
    for (double& v : u.values) v = -1.75;
    for (double v : interpolate(u, ib)) REQUIRE(v == Approx(-1.75).margin(1e-13));
    for (double v : interpolate(ScalarField(kBox), ib)) REQUIRE(v == 0.0);
}

TEST_CASE("interpolation recovers linear coordinates via the first moment") {
    // u = x away from the wrap seam; checked against direct summation
    ScalarField u(kBox);
    for (int j = 0; j < kBox.n; ++j)
        for (int i = 0; i < kBox.n; ++i) u(i, j) = kBox.node(i, j).x;
    ImmersedBoundary ib;
    ib.points = {{0.1037, 0.0521}, {0.21, -0.13}, {-0.17, 0.08}};
    ib.ds = {0.1, 0.1, 0.1};
    ib.normals = {{1, 0}, {1, 0}, {1, 0}};
    const BoundaryDensity got = interpolate(u, ib);
    for (int p = 0; p < ib.size(); ++p) {
        REQUIRE(got[p] == Approx(ib.points[p].x).margin(1e-12));
        // direct 4x4 summation oracle
        double acc = 0.0;
        const double dx = kBox.dx();
        const int i0 = int(std::floor((ib.points[p].x - kBox.origin.x) / dx)) - 1;
        const int j0 = int(std::floor((ib.points[p].y - kBox.origin.y) / dx)) - 1;
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a) {
                const Vec2 node = kBox.node(i0 + a, j0 + b);
                acc += node.x * phi4((ib.points[p].x - node.x) / dx) *
                       phi4((ib.points[p].y - node.y) / dx);
            }
        REQUIRE(got[p] == Approx(acc).margin(1e-13));
    }
}

TEST_CASE("spread support stays within 2 cells of the boundary") {
    const auto ib = circle_ib(40);
    const ScalarField f = spread(ib, BoundaryDensity(ib.size(), 1.0), kBox);
    const double reach = 2.0 * kBox.dx() * std::sqrt(2.0) + 1e-12;
    for (int j = 0; j < kBox.n; ++j)
        for (int i = 0; i < kBox.n; ++i) {
            if (f(i, j) == 0.0) continue;
            double dmin = 1e300;
            for (const Vec2& p : ib.points) dmin = std::min(dmin, norm(kBox.node(i, j) - p));
            REQUIRE(dmin <= reach);
        }
}

TEST_CASE("spread is linear") {
    const auto ib = circle_ib(32);
    const BoundaryDensity q1 = random_vector(ib.size(), 31);
    const BoundaryDensity q2 = random_vector(ib.size(), 32);
    BoundaryDensity mix(ib.size());
    for (int i = 0; i < ib.size(); ++i) mix[i] = 2.0 * q1[i] - 0.5 * q2[i];
    const ScalarField fm = spread(ib, mix, kBox);
    const ScalarField f1 = spread(ib, q1, kBox);
    const ScalarField f2 = spread(ib, q2, kBox);
    for (size_t t = 0; t < fm.values.size(); ++t)
        REQUIRE(fm.values[t] == Approx(2.0 * f1.values[t] - 0.5 * f2.values[t]).margin(1e-10));
}

TEST_CASE("dipole spread: zero density, zero mean, and the direct oracle") {
    const GridSpec box{1.0, 32, {-0.5, -0.5}};
    const auto ib = discretize_curve(circle({0, 0}, 0.25), 2.0 * kPi * 0.25 / 24.0,
                                     Orientation::InteriorDomain);
    const ScalarField z = spread_dipole(ib, BoundaryDensity(ib.size(), 0.0), box,
                                        Discretization::FiniteDifference);
    for (double v : z.values) REQUIRE(v == 0.0);

    const BoundaryDensity ones(ib.size(), 1.0);
    for (auto d : {Discretization::FiniteDifference, Discretization::FourierSpectral}) {
        const ScalarField f = spread_dipole(ib, ones, box, d);
        REQUIRE(std::abs(f.sum() * box.dx() * box.dx()) < 1e-12);
    }

    // direct summation oracle: divergence of the component spreads
    const ScalarField f = spread_dipole(ib, ones, box, Discretization::FiniteDifference);
    BoundaryDensity qx(ib.size()), qy(ib.size());
    for (int i = 0; i < ib.size(); ++i) {
        qx[i] = ib.normals[i].x;
        qy[i] = ib.normals[i].y;
    }
    const ScalarField fx = spread(ib, qx, box);
    const ScalarField fy = spread(ib, qy, box);
    const double inv2dx = 1.0 / (2.0 * box.dx());
    double min_v = 1e300, max_v = -1e300;
    for (int j = 0; j < box.n; ++j)
        for (int i = 0; i < box.n; ++i) {
            const double oracle = (fx.at_wrapped(i + 1, j) - fx.at_wrapped(i - 1, j)) * inv2dx +
                                  (fy.at_wrapped(i, j + 1) - fy.at_wrapped(i, j - 1)) * inv2dx;
            REQUIRE(f(i, j) == Approx(oracle).margin(1e-10));
            min_v = std::min(min_v, f(i, j));
            max_v = std::max(max_v, f(i, j));
        }
    // the dipole sheet has both signs across the boundary band
    REQUIRE(min_v < 0.0);
    REQUIRE(max_v > 0.0);
}
