#pragma once

// Reference computations that share no code with the library: composite
// Gauss-Legendre quadrature, closed-form Gaussian pieces, direct formulas.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

struct GaussLegendre {
    std::vector<double> nodes, weights;

    explicit GaussLegendre(int order) {
        nodes.resize(order);
        weights.resize(order);
        for (int i = 0; i < order; ++i) {
            // Newton on P_order from the Chebyshev guess.
            double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= order; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

/// Integral of f over [a, b] on `panels` equal panels of 20-point Gauss-Legendre.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 400) {
    static const GaussLegendre gl(20);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double s = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

/// Integral of exp(-s^2) over [t, 40].
inline double gaussian_tail(double t) {
    return integrate([](double s) { return std::exp(-s * s); }, t, 40.0, 2000);
}

/// Young function, straight from its two-branch definition.
inline double young_A(double s) {
    const double e3 = std::exp(-3.0);
    if (s <= e3) return s == 0.0 ? 0.0 : -s * s * std::log(s * s);
    return 3.0 * s * s + 4.0 * e3 * s - e3 * e3;
}

/// Profile of the standing wave with parameters (t1, t2) at frequency omega.
inline double profile(double x, double t1, double t2, double omega) {
    const double a = std::exp(0.5 * (omega + 1.0));
    return x > 0.0 ? a * std::exp(-0.5 * (x + t1) * (x + t1)) : -a * std::exp(-0.5 * (x - t2) * (x - t2));
}

/// Integral of |profile|^2 over R \ {0} by quadrature.
inline double profile_mass(double t1, double t2, double omega) {
    auto sq = [&](double x) {
        const double p = profile(x, t1, t2, omega);
        return p * p;
    };
    return integrate(sq, 1e-300, 20.0, 2000) + integrate(sq, -20.0, -1e-300, 2000);
}

/// Continuous quadratic form: integral of |phi'|^2 minus |jump|^2 / gamma.
inline double profile_form(double t1, double t2, double omega, double gamma) {
    const double a2 = std::exp(omega + 1.0);
    auto right = [&](double x) { return a2 * (x + t1) * (x + t1) * std::exp(-(x + t1) * (x + t1)); };
    auto left = [&](double x) { return a2 * (x - t2) * (x - t2) * std::exp(-(x - t2) * (x - t2)); };
    const double jump = std::sqrt(a2) * (std::exp(-0.5 * t1 * t1) + std::exp(-0.5 * t2 * t2));
    return integrate(right, 0.0, 20.0, 2000) + integrate(left, -20.0, 0.0, 2000) - jump * jump / gamma;
}

/// Brute-force bisection for the zero of h on (1, inf), independent of the
/// library's bracket logic: scan upward on a fine grid, then bisect.
inline double h_root(double gamma) {
    auto h = [gamma](double t) {
        return (t + 1.0) * (t + 1.0) * (1.0 - 1.0 / (t * t)) - gamma * gamma * std::log(t * t);
    };
    double lo = 1.0 + 1e-6;
    double hi = lo;
    while (h(hi) <= 0.0) hi += 0.01;
    lo = hi - 0.01;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
