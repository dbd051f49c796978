#pragma once

#include <random>

#include "ibdl/ibdl.hpp"

namespace ibdl::testing {

inline std::mt19937 rng(uint32_t seed) { return std::mt19937(seed); }

inline ScalarField random_field(const GridSpec& spec, uint32_t seed, bool zero_mean = false) {
    ScalarField f(spec);
    auto gen = rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : f.values) v = dist(gen);
    if (zero_mean) {
        const double m = f.mean();
        for (double& v : f.values) v -= m;
    }
    return f;
}

inline std::vector<double> random_vector(int n, uint32_t seed) {
    std::vector<double> v(n);
    auto gen = rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& x : v) x = dist(gen);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double grid_inner(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s;
}

}  // namespace ibdl::testing
