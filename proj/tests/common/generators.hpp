#pragma once

// Hand-rolled random generators for the property suites. Every generator is
// driven by an explicit std::mt19937_64 so a fixed seed pins the whole case list.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "logdelta/grid.hpp"

namespace gen {

using logdelta::Complex;
using logdelta::Field;
using logdelta::Grid;

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double a, double b) {
    return std::exp(uniform(rng, std::log(a), std::log(b)));
}

inline Complex complex_normal(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline Complex polar_log_uniform(std::mt19937_64& rng, double rmin, double rmax) {
    const double r = log_uniform(rng, rmin, rmax);
    return std::polar(r, uniform(rng, -std::numbers::pi, std::numbers::pi));
}

/// Smooth on each half-line, with an independent jump at 0: a few Gaussian
/// bumps plus one bump supported on x > 0 only. Overall scale in
/// [amp_min, amp_max] (log-uniform).
inline Field smooth_field(std::mt19937_64& rng, const Grid& grid, double amp_min = 0.05,
                          double amp_max = 3.0) {
    struct Bump {
        double c, w;
        Complex a;
    };
    const int count = 1 + static_cast<int>(rng() % 4);
    std::vector<Bump> bumps;
    for (int i = 0; i < count; ++i) {
        const double c = uniform(rng, -4.0, 4.0);
        const double w = uniform(rng, 0.4, 2.0);
        bumps.push_back({c, w, complex_normal(rng)});
    }
    const Complex side = complex_normal(rng);
    const double side_w = uniform(rng, 0.5, 2.0);
    const double scale = log_uniform(rng, amp_min, amp_max);
    Field f = Field::sample(grid, [&](double x) {
        Complex s = x > 0.0 ? side * std::exp(-0.5 * x * x / (side_w * side_w)) : Complex(0.0, 0.0);
        for (const auto& b : bumps) s += b.a * std::exp(-0.5 * (x - b.c) * (x - b.c) / (b.w * b.w));
        return s;
    });
    double peak = 0.0;
    for (const Complex& v : f.values()) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) f *= Complex(scale / peak, 0.0);
    return f;
}

/// Bounded smooth complex multiplier 1 + sum c_k cos(k x / 3 + p_k); with
/// v = u * multiplier the direction never dominates u in its tails.
inline std::vector<Complex> multiplier(std::mt19937_64& rng, const Grid& grid) {
    std::vector<Complex> c(3);
    std::vector<double> p(3);
    for (int k = 0; k < 3; ++k) {
        c[k] = 0.3 * complex_normal(rng);
        p[k] = uniform(rng, 0.0, 6.283);
    }
    std::vector<Complex> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        Complex s(1.0, 0.0);
        for (int k = 0; k < 3; ++k) s += c[k] * std::cos((k + 1) * grid.x(j) / 3.0 + p[k]);
        out[j] = s;
    }
    return out;
}

}  // namespace gen
