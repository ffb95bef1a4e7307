#include <doctest.h>

#include <cmath>

#include "logdelta/grid.hpp"
#include "logdelta/tridiagonal.hpp"

using namespace logdelta;
using doctest::Approx;

TEST_CASE("staggered nodes straddle the origin") {
    const Grid g(20.0, 4096);
    CHECK(g.dx() == Approx(40.0 / 4096).epsilon(1e-15));
    const std::size_t k = g.interface_index();
    CHECK(k == 2048);
    CHECK(g.x(k - 1) == Approx(-0.5 * g.dx()).epsilon(1e-12));
    CHECK(g.x(k) == Approx(0.5 * g.dx()).epsilon(1e-12));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(g.x(j) != 0.0);
    CHECK(g.coordinates().size() == 4096);
    CHECK_THROWS_AS(Grid(20.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(Grid(20.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Grid(-1.0, 64), std::invalid_argument);
}

TEST_CASE("traces are exact for quadratics on each side") {
    const Grid g(5.0, 64);
    const Field u = Field::sample(g, [](double x) {
        return x > 0 ? Complex(1.0 + 2.0 * x - 3.0 * x * x, 0.5) : Complex(-2.0 + 0.5 * x + x * x, 0.0);
    });
    const Traces t = u.traces();
    CHECK(t.right.real() == Approx(1.0).epsilon(1e-12));
    CHECK(t.right.imag() == Approx(0.5).epsilon(1e-12));
    CHECK(t.left.real() == Approx(-2.0).epsilon(1e-12));
    CHECK(t.slope_right.real() == Approx(2.0).epsilon(1e-10));
    CHECK(t.slope_left.real() == Approx(0.5).epsilon(1e-10));
    CHECK(t.jump().real() == Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mirror and arithmetic") {
    const Grid g(3.0, 16);
    const Field u = Field::sample(g, [](double x) { return Complex(x, x * x); });
    const Field m = mirrored(u);
    for (std::size_t j = 0; j < u.size(); ++j) {
        CHECK(m[j].real() == Approx(-u[j].real()).epsilon(1e-14));
        CHECK(m[j].imag() == Approx(u[j].imag()).epsilon(1e-14));
    }
    const Field s = u + m;
    CHECK(std::abs(s[3].real()) < 1e-14);
    const Field other(Grid(3.0, 18));
    CHECK_THROWS_AS(Field(u) += other, std::invalid_argument);
    CHECK(u.all_finite());
    CHECK_THROWS_AS(Field(g, std::vector<Complex>(3)), std::invalid_argument);
}

TEST_CASE("Thomas solve against dense multiply") {
    Tridiagonal<Complex> a;
    const std::size_t n = 50;
    for (std::size_t j = 0; j < n; ++j) a.diag.push_back(Complex(4.0 + 0.01 * j, 0.3));
    for (std::size_t j = 0; j + 1 < n; ++j) a.off.push_back(Complex(-1.0, 0.1 * std::sin(j)));
    std::vector<Complex> x(n), b(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = Complex(std::cos(j), std::sin(0.5 * j));
    a.multiply<Complex>(x, b);
    TridiagonalFactor<Complex> f(a);
    f.solve<Complex>(b);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(b[j] - x[j]) < 1e-13);

    Tridiagonal<double> singular{{0.0, 1.0}, {1.0}};
    CHECK_THROWS(TridiagonalFactor<double>(singular));
}
