#pragma once

// Scalar special functions of the logarithmic nonlinearity and the Orlicz
// space machinery built on the Young function A.

#include <complex>
#include <span>

namespace logdelta {

using Complex = std::complex<double>;

/// Cut-off level of the regularized nonlinearity. The switch points of a_m
/// and b_m are |z| = 1/m and |z| = m, so any real m >= 1 is admissible.
class RegularizationLevel {
public:
    explicit RegularizationLevel(double m);

    double value() const noexcept { return m_; }
    double lower() const noexcept { return 1.0 / m_; }
    double upper() const noexcept { return m_; }

private:
    double m_;
};

enum class ScalarFn { A, B, F };

// s^2 log(s^2), extended by F(0) = 0. Throws std::domain_error on s < 0 or
// non-finite input; the same applies to eval_A / eval_B / eval.
double eval_F(double s);

// Two-branch Young function, switching at s = e^-3.
double eval_A(double s);
double eval_B(double s);
double eval(ScalarFn fn, double s);

/// Derivative A'(s); A is C^1 on [0, inf).
double eval_A_prime(double s);

// a(z) = z A(|z|) / |z|^2 and b(z) = z B(|z|) / |z|^2, both 0 at z = 0.
Complex eval_a(Complex z);
Complex eval_b(Complex z);

Complex eval_am(Complex z, RegularizationLevel m);
Complex eval_bm(Complex z, RegularizationLevel m);

/// g_m = b_m - a_m. Equal to z log|z|^2 on 1/m <= |z| <= m.
Complex eval_gm(Complex z, RegularizationLevel m);

/// The real ratio g_m(z) / z as a function of r = |z| > 0; the phase rate of
/// the regularized nonlinear flow. Returns 0 at r = 0.
double gm_rate(double r, RegularizationLevel m);

/// G_m(z) = integral of g_m(s) over s in [0, |z|], evaluated piecewise in
/// closed form.
double eval_Gm(double r, RegularizationLevel m);

/// Complementary error function, in-house (series below t = 1, continued
/// fraction above).
double erfc_inhouse(double t);

/// Tail integral of exp(-s^2) over [t, inf) = (sqrt(pi)/2) erfc(t). Any real t.
double gamma_tail(double t);

/// Luxemburg norm inf{k > 0 : dx * sum A(|u_j| / k) <= 1} of the sampled
/// function, found by geometric bisection on k. Zero samples give 0.
/// Throws std::domain_error on non-finite samples.
double luxemburg_norm(std::span<const Complex> samples, double dx);

/// dx * sum A(|u_j| / k), the modular whose unit level set defines the norm.
double orlicz_modular(std::span<const Complex> samples, double dx, double k = 1.0);

}  // namespace logdelta
