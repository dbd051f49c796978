#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "test_support.hpp"

using namespace ibdl;
using namespace ibdl::testing;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent arclength positions: resample the curve 10x finer than the
// table discretize_curve used and accumulate chord lengths up to each point.
double arc_position(const ParametricCurve& c, Vec2 target, int samples) {
    double best = 1e300, s_at = 0.0, s = 0.0;
    Vec2 prev = c.point(0.0);
    for (int m = 1; m <= samples; ++m) {
        const Vec2 p = c.point(double(m) / samples);
        s += norm(p - prev);
        prev = p;
        const double d = norm(p - target);
        if (d < best) {
            best = d;
            s_at = s;
        }
    }
    return s_at;
}
}  // namespace

TEST_CASE("unit circle at target 2pi/8 gives 8 points on exact angles") {
    const auto ib = discretize_curve(circle({0, 0}, 1.0), 2.0 * kPi / 8.0, Orientation::InteriorDomain);
    REQUIRE(ib.size() == 8);
    for (int i = 0; i < 8; ++i) {
        const double a = 2.0 * kPi * i / 8.0;
        REQUIRE(ib.points[i].x == Approx(std::cos(a)).margin(1e-6));
        REQUIRE(ib.points[i].y == Approx(std::sin(a)).margin(1e-6));
        REQUIRE(ib.ds[i] == Approx(2.0 * kPi / 8.0).epsilon(1e-7));
    }
}

TEST_CASE("circle R=0.25 at target 0.75/64 lands on 134 points") {
    const auto ib = discretize_curve(circle({0, 0}, 0.25), 0.75 / 64.0, Orientation::InteriorDomain);
    REQUIRE(ib.size() == 134);
}

TEST_CASE("starfish points are equally spaced in arclength") {
    const auto c = starfish();
    const auto ib = discretize_curve(c, 0.75 * 4.0 / 64.0, Orientation::ExteriorDomain);
    const int n = ib.size();
    // oracle: fine resampling of the cumulative arclength table
    std::vector<double> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = arc_position(c, ib.points[i], 64 * n * 10);
    double total = 0.0;
    {
        Vec2 prev = c.point(0.0);
        for (int m = 1; m <= 64 * n * 10; ++m) {
            const Vec2 p = c.point(double(m) / (64 * n * 10));
            total += norm(p - prev);
            prev = p;
        }
    }
    const double target = total / n;
    for (int i = 1; i < n; ++i) {
        const double gap = pos[i] - pos[i - 1];
        REQUIRE(gap == Approx(target).epsilon(1e-4));
    }
    // the stored weights are the uniform arclength increments
    for (double s : ib.ds) REQUIRE(s == Approx(target).epsilon(1e-6));
}

TEST_CASE("degenerate curve is rejected") {
    REQUIRE_THROWS_AS(discretize_curve(circle({0, 0}, 0.25), 1.0, Orientation::InteriorDomain),
                      DegenerateCurve);
}

TEST_CASE("estimated normals on the 4-point circle") {
    ImmersedBoundary ib;
    ib.points = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    ib.orientation = Orientation::InteriorDomain;
    estimate_normals(ib);
    REQUIRE(ib.normals[0].x == Approx(1.0));
    REQUIRE(ib.normals[0].y == Approx(0.0).margin(1e-15));

    ib.orientation = Orientation::ExteriorDomain;
    estimate_normals(ib);
    REQUIRE(ib.normals[0].x == Approx(-1.0));
}

TEST_CASE("coincident neighbors are rejected") {
    ImmersedBoundary ib;
    ib.points = {{0, 0}, {1, 0}, {0, 0}};  // X(i+1) == X(i-1) at index 1... no: at index 0 and 2
    ib.orientation = Orientation::InteriorDomain;
    REQUIRE_THROWS_AS(estimate_normals(ib), CoincidentPoints);
}

TEST_CASE("128-point circle: estimated normals align with the exact radial ones") {
    const auto exact = discretize_curve(circle({0, 0}, 0.25), 2.0 * kPi * 0.25 / 128.0,
                                        Orientation::InteriorDomain);
    ImmersedBoundary est = exact;
    estimate_normals(est);
    const double ds = est.ds[0];
    for (int i = 0; i < est.size(); ++i) {
        const double cosang = dot(est.normals[i], exact.normals[i]);
        const double angle = std::acos(std::min(1.0, cosang));
        REQUIRE(angle <= ds * ds + 1e-9);
    }
}

TEST_CASE("estimate_spacing uses chord lengths") {
    ImmersedBoundary sq;
    sq.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    sq.orientation = Orientation::InteriorDomain;
    estimate_spacing(sq);
    for (double s : sq.ds) REQUIRE(s == Approx(1.0));

    const int n = 64;
    auto circ = discretize_curve(circle({0, 0}, 0.25), 2.0 * kPi * 0.25 / n, Orientation::InteriorDomain);
    estimate_spacing(circ);
    const double chord = 2.0 * 0.25 * std::sin(kPi / circ.size());
    for (double s : circ.ds) REQUIRE(s == Approx(chord).epsilon(1e-6));
}

TEST_CASE("chord spacing sums to the arclength-table total within 0.1%") {
    auto ib = discretize_curve(starfish(), 0.02, Orientation::ExteriorDomain);
    const double table_total = ib.ds[0] * ib.size();
    estimate_spacing(ib);
    double chord_total = 0.0;
    for (double s : ib.ds) chord_total += s;
    REQUIRE(chord_total == Approx(table_total).epsilon(1e-3));
}

TEST_CASE("normal consistency: interior-domain normals point away from the centroid") {
    auto ib = discretize_curve(circle({0.1, -0.2}, 0.25), 2.0 * kPi * 0.25 / 12.0,
                               Orientation::InteriorDomain, NormalsMode::ForceEstimated);
    const Vec2 c = ib.centroid();
    for (int i = 0; i < ib.size(); ++i) REQUIRE(dot(ib.normals[i], ib.points[i] - c) > 0.0);
}

TEST_CASE("built-in curve sanity: starfish radius and circle point") {
    const auto s = starfish();
    REQUIRE(norm(s.point(0.0) - Vec2{1.0, 0.0}) < 1e-15);          // sin(0) factor
    REQUIRE(norm(s.point(0.05)) == Approx(1.25).margin(1e-12));    // sin(pi/2) lobe tip
    const auto c = circle({0, 0}, 0.25);
    REQUIRE(norm(c.point(0.0) - Vec2{0.25, 0.0}) < 1e-15);
}

TEST_CASE("boundary import round-trips through the text format") {
    const auto ib = discretize_curve(circle({0, 0}, 0.25), 0.02, Orientation::InteriorDomain);
    const std::string path = "/tmp/ibdl_test_boundary.txt";
    {
        std::ofstream out(path);
        for (const Vec2& p : ib.points) out << fmt17(p.x) << " " << fmt17(p.y) << "\n";
    }
    const auto loaded = load_boundary_points(path, Orientation::InteriorDomain);
    REQUIRE(loaded.size() == ib.size());
    REQUIRE(loaded.ds.size() == ib.points.size());
    REQUIRE(loaded.normals.size() == ib.points.size());
    for (int i = 0; i < loaded.size(); ++i)
        REQUIRE(norm(loaded.points[i] - ib.points[i]) < 1e-14);
}
