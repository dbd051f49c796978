#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "ibdl/grid.hpp"

namespace ibdl {

/// Closed simple curve, parametrized by theta in [0,1). `normal`, when
/// present, returns the exact unit normal pointing out of the curve interior.
struct ParametricCurve {
    std::function<Vec2(double)> point;
    std::function<Vec2(double)> normal;  // empty when no closed form is available

    bool has_exact_normal() const { return bool(normal); }
};

inline ParametricCurve circle(Vec2 center, double radius) {
    ParametricCurve c;
    c.point = [=](double t) {
        const double a = 2.0 * std::numbers::pi * t;
        return Vec2{center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
    };
    c.normal = [](double t) {
        const double a = 2.0 * std::numbers::pi * t;
        return Vec2{std::cos(a), std::sin(a)};
    };
    return c;
}

/// Five-lobed star: (1 + sin(10 pi t)/4) (cos 2 pi t, sin 2 pi t).
inline ParametricCurve starfish() {
    ParametricCurve c;
    c.point = [](double t) {
        const double r = 1.0 + std::sin(10.0 * std::numbers::pi * t) / 4.0;
        const double a = 2.0 * std::numbers::pi * t;
        return Vec2{r * std::cos(a), r * std::sin(a)};
    };
    return c;
}

}  // namespace ibdl
