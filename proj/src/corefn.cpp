#include "logdelta/corefn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace logdelta {

namespace {

constexpr double kJunction = 0.049787068367863944;  // e^-3
constexpr double kE3 = 0.049787068367863944;         // e^-3 as a coefficient
constexpr double kE6 = 0.0024787521766663585;        // e^-6

void check_nonnegative(double s, const char* what) {
    if (!std::isfinite(s) || s < 0.0) {
        throw std::domain_error(std::string(what) + ": argument must be finite and >= 0, got " +
                                std::to_string(s));
    }
}

// Antiderivative of B(s)/s on s >= e^-3 (B vanishes identically below).
double primitive_b_over_s(double s) {
    const double s2 = s * s;
    return 0.5 * s2 * std::log(s2) + s2 + 4.0 * kE3 * s - kE6 * std::log(s);
}

// Antiderivative of A(s)/s on s >= e^-3.
double primitive_a_over_s(double s) {
    return 1.5 * s * s + 4.0 * kE3 * s - kE6 * std::log(s);
}

// Integral of b(s) = B(s)/s over [0, c] for real c >= 0.
double integral_b(double c) {
    if (c <= kJunction) return 0.0;
    return primitive_b_over_s(c) - primitive_b_over_s(kJunction);
}

// s^2/2 (log s^2 - 1): antiderivative of s log s^2, vanishing at 0.
double primitive_log(double s) {
    if (s == 0.0) return 0.0;
    const double s2 = s * s;
    return 0.5 * s2 * (std::log(s2) - 1.0);
}

// Integral of A(s)/s over [lo, hi] with e^-3 <= lo <= hi.
double integral_a_over_s(double lo, double hi) {
    return primitive_a_over_s(hi) - primitive_a_over_s(lo);
}

double erf_series(double t) {
    // erf(t) = 2/sqrt(pi) e^{-t^2} sum_n 2^n t^{2n+1} / (2n+1)!!; every term is
    // positive so there is no cancellation inside the sum.
    double term = t;
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
        sum += term;
        term *= 2.0 * t * t / (2.0 * n + 1.0);
        if (term < 1e-17 * sum) break;
    }
    return 2.0 * std::numbers::inv_sqrtpi * std::exp(-t * t) * sum;
}

// Continued fraction 1/(t + (1/2)/(t + 1/(t + (3/2)/(t + ...)))) by modified
// Lentz; erfc(t) = e^{-t^2}/sqrt(pi) times this.
double erfc_fraction(double t) {
    constexpr double tiny = 1e-300;
    double f = t;
    double c = f;
    double d = 0.0;
    for (int k = 1; k < 2000; ++k) {
        const double a = 0.5 * k;
        d = t + a * d;
        d = (d == 0.0) ? 1.0 / tiny : 1.0 / d;
        c = t + a / c;
        if (c == 0.0) c = tiny;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 / f;
}

}  // namespace

RegularizationLevel::RegularizationLevel(double m) : m_(m) {
    if (!std::isfinite(m) || m < 1.0) {
        throw std::invalid_argument("regularization level must be finite and >= 1, got " +
                                    std::to_string(m));
    }
}

double eval_F(double s) {
    check_nonnegative(s, "eval_F");
    if (s == 0.0) return 0.0;
    const double s2 = s * s;
    return s2 * std::log(s2);
}

double eval_A(double s) {
    check_nonnegative(s, "eval_A");
    if (s <= kJunction) {
        if (s == 0.0) return 0.0;
        const double s2 = s * s;
        return -s2 * std::log(s2);
    }
    return 3.0 * s * s + 4.0 * kE3 * s - kE6;
}

double eval_B(double s) {
    // Below the junction B = F + A cancels exactly.
    check_nonnegative(s, "eval_B");
    if (s <= kJunction) return 0.0;
    // F + A vanishes to third order at the junction; with s = e^{-3}(1 + u),
    // B = e^{-6} sum_{k>=3} (-1)^{k+1} 4 u^k / (k (k-1) (k-2)).
    const double u = s / kJunction - 1.0;
    if (u < 0.5) {
        double sum = 0.0, pw = u * u;
        for (int k = 3; k < 80; ++k) {
            pw *= u;
            const double term = 4.0 * pw / (k * (k - 1.0) * (k - 2.0));
            sum += (k % 2 == 1) ? term : -term;
            if (term < 1e-18 * sum) break;
        }
        return kE6 * sum;
    }
    return eval_F(s) + eval_A(s);
}

double eval(ScalarFn fn, double s) {
    switch (fn) {
        case ScalarFn::A: return eval_A(s);
        case ScalarFn::B: return eval_B(s);
        case ScalarFn::F: return eval_F(s);
    }
    throw std::invalid_argument("unknown ScalarFn");
}

double eval_A_prime(double s) {
    check_nonnegative(s, "eval_A_prime");
    if (s <= kJunction) {
        if (s == 0.0) return 0.0;
        return -2.0 * s * (std::log(s * s) + 1.0);
    }
    return 6.0 * s + 4.0 * kE3;
}

Complex eval_a(Complex z) {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return z * (eval_A(r) / (r * r));
}

Complex eval_b(Complex z) {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return z * (eval_B(r) / (r * r));
}

Complex eval_am(Complex z, RegularizationLevel m) {
    if (std::abs(z) >= m.lower()) return eval_a(z);
    // m z a(1/m), with a(1/m) = m A(1/m) on the positive real axis.
    const double lo = m.lower();
    return z * (m.value() * eval_a(Complex(lo, 0.0)).real());
}

Complex eval_bm(Complex z, RegularizationLevel m) {
    if (std::abs(z) <= m.upper()) return eval_b(z);
    const double hi = m.upper();
    return z * (eval_b(Complex(hi, 0.0)).real() / hi);
}

Complex eval_gm(Complex z, RegularizationLevel m) {
    return eval_bm(z, m) - eval_am(z, m);
}

double gm_rate(double r, RegularizationLevel m) {
    check_nonnegative(r, "gm_rate");
    if (r == 0.0) {
        // Limit of the lower branch: b(s)/s -> 0, so only -m a(1/m) remains.
        const double lo = m.lower();
        return -m.value() * m.value() * eval_A(lo);
    }
    if (r >= m.lower() && r <= m.upper()) return std::log(r * r);
    return eval_gm(Complex(r, 0.0), m).real() / r;
}

double eval_Gm(double r, RegularizationLevel m) {
    check_nonnegative(r, "eval_Gm");
    const double lo = m.lower();
    const double hi = m.upper();
    const double slope_lo = m.value() * m.value() * eval_A(lo);  // m a(1/m)

    const double r_low = std::min(r, lo);
    double total = integral_b(r_low) - 0.5 * slope_lo * r_low * r_low;
    if (r > lo) {
        total += primitive_log(std::min(r, hi)) - primitive_log(lo);
    }
    if (r > hi) {
        const double slope_hi = eval_B(hi) / (hi * hi);  // b(m) / m
        total += 0.5 * slope_hi * (r * r - hi * hi) - integral_a_over_s(hi, r);
    }
    return total;
}

double erfc_inhouse(double t) {
    if (std::isnan(t)) return t;
    if (t < 0.0) return 2.0 - erfc_inhouse(-t);
    if (t < 1.0) return 1.0 - erf_series(t);
    if (t > 27.3) return 0.0;  // e^{-t^2} underflows
    return std::exp(-t * t) * std::numbers::inv_sqrtpi * erfc_fraction(t);
}

double gamma_tail(double t) {
    constexpr double half_sqrt_pi = 0.5 / std::numbers::inv_sqrtpi;
    if (t < 0.0) return 2.0 * half_sqrt_pi - gamma_tail(-t);
    return half_sqrt_pi * erfc_inhouse(t);
}

double orlicz_modular(std::span<const Complex> samples, double dx, double k) {
    double sum = 0.0;
    for (const Complex& v : samples) sum += eval_A(std::abs(v) / k);
    return dx * sum;
}

double luxemburg_norm(std::span<const Complex> samples, double dx) {
    double peak = 0.0;
    for (const Complex& v : samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::domain_error("luxemburg_norm: non-finite sample");
        }
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) return 0.0;

    double lo = 1e-12;
    if (orlicz_modular(samples, dx, lo) <= 1.0) return lo;
    double hi = peak * dx * static_cast<double>(samples.size()) + 1.0;
    while (orlicz_modular(samples, dx, hi) > 1.0) hi *= 2.0;

    // k -> modular(k) is strictly decreasing wherever it is positive.
    while (hi / lo - 1.0 > 1e-12) {
        const double mid = std::sqrt(lo * hi);
        if (orlicz_modular(samples, dx, mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace logdelta
