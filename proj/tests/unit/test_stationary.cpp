#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../common/generators.hpp"
#include "../common/oracles.hpp"
#include "logdelta/stationary.hpp"
#include "logdelta/corefn.hpp"

using namespace logdelta;
using doctest::Approx;

TEST_CASE("h at 1 and its slope") {
    for (double g : {0.5, 2.0, 3.0, 7.0}) {
        CHECK(std::abs(eval_h(1.0, g)) < 1e-15);
        const double eps = 1e-6;
        const double d = (eval_h(1.0 + eps, g) - eval_h(1.0 - eps, g)) / (2.0 * eps);
        CHECK(d == Approx(2.0 * (4.0 - g * g)).epsilon(1e-6));
    }
    CHECK(eval_h(3.0, 3.0) < 0.0);
    CHECK(eval_h(5.0, 3.0) > 0.0);
    CHECK_THROWS_AS(eval_h(0.0, 3.0), std::invalid_argument);
}

TEST_CASE("solve_3s branch counts and residuals") {
    for (double g : {0.5, 1.0, 1.99, 2.0}) {
        const auto s = solve_3s(g);
        REQUIRE(s.size() == 1);
        CHECK(s[0].first == Approx(2.0 / g).epsilon(1e-15));
        CHECK(s[0].second == s[0].first);
    }
    CHECK(solve_3s(2.0)[0].first == 1.0);
    CHECK(solve_3s(1.0)[0].first == 2.0);
    for (double g : {2.01, 2.5, 3.0, 5.0, 10.0}) {
        const auto s = solve_3s(g);
        REQUIRE(s.size() == 3);
        for (const auto& [t1, t2] : s) {
            CHECK(std::abs(pair_balance(t1) - pair_balance(t2)) <= 1e-10);
            CHECK(std::abs(1.0 / t1 + 1.0 / t2 - g) <= 1e-10);
        }
        CHECK(s[1].first < 2.0 / g);
        CHECK(s[1].second > 2.0 / g);
        CHECK(s[2].first == s[1].second);
        CHECK(s[2].second == s[1].first);
    }
    CHECK_THROWS_AS(solve_3s(0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_3s(-1.0), std::invalid_argument);
}

TEST_CASE("asymmetric pair against an independent root of h") {
    // z0 from a fine forward scan, then the pair ((z0+1)/g, (z0+1)/(g z0))
    for (double g : {2.01, 2.1, 2.5, 3.0, 5.0, 10.0}) {
        const double z0 = oracle::h_root(g);
        const auto s = solve_3s(g);
        CHECK(s[1].second == Approx((z0 + 1.0) / g).epsilon(1e-12));
        CHECK(s[1].first == Approx((z0 + 1.0) / (g * z0)).epsilon(1e-12));
    }
    // tabulated values
    CHECK(solve_3s(3.0)[1].first == Approx(0.411742).epsilon(1e-6));
    CHECK(solve_3s(3.0)[1].second == Approx(1.750416).epsilon(1e-6));
    CHECK(solve_3s(5.0)[1].first == Approx(0.220575).epsilon(1e-5));
}

TEST_CASE("pitchfork: asymmetry vanishes as gamma -> 2+") {
    double prev = 1e300;
    for (int k = 1; k <= 6; ++k) {
        const auto s = solve_3s(2.0 + std::pow(10.0, -k));
        REQUIRE(s.size() == 3);
        const double gap = std::abs(s[1].second - s[1].first);
        CHECK(gap < prev);
        CHECK(gap > 0.0);
        prev = gap;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("pair balance peaks at 1") {
    CHECK(pair_balance(1.0) == Approx(std::exp(-0.5)).epsilon(1e-15));
    for (double t = 0.05; t < 5.0; t += 0.05) {
        if (std::abs(t - 1.0) > 1e-9) CHECK(pair_balance(t) < pair_balance(1.0));
    }
}

TEST_CASE("sigma map is an involution") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const double g = gen::uniform(rng, 0.5, 8.0);
        const double t = gen::uniform(rng, 1.0 / g + 0.01, 10.0);
        CHECK(sigma_map(sigma_map(t, g), g) == Approx(t).epsilon(1e-10));
        CHECK(1.0 / t + 1.0 / sigma_map(t, g) == Approx(g).epsilon(1e-12));
    }
    CHECK(sigma_map(2.0 / 3.0, 3.0) == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(sigma_map(1.0 / 3.0, 3.0), std::invalid_argument);
}

TEST_CASE("n_gamma critical points") {
    CHECK(n_gamma(1.0, 2.0) == Approx(2.0 * gamma_tail(1.0)).epsilon(1e-15));
    for (double g : {2.5, 3.0, 5.0}) {
        const auto s = solve_3s(g);
        for (const auto& [t1, t2] : s) {
            const double h = 1e-5;
            const double d = (n_gamma(t1 + h, g) - n_gamma(t1 - h, g)) / (2.0 * h);
            CHECK(std::abs(d) <= 1e-6);
        }
    }
    // local maximum at 2/gamma for gamma = 3
    const double t = 2.0 / 3.0, h = 1e-3;
    CHECK(n_gamma(t + h, 3.0) - 2.0 * n_gamma(t, 3.0) + n_gamma(t - h, 3.0) < 0.0);
}

TEST_CASE("profile shape and traces") {
    const auto sym = stationary_states(2.0, 0.0).at(0);
    for (double x : {0.1, 0.7, 3.0}) CHECK(profile(sym, -x) == -profile(sym, x));
    CHECK_THROWS(profile(sym, 0.0));

    for (double g : {2.0, 3.0, 6.0}) {
        for (const auto& p : stationary_states(g, 0.3)) {
            const Traces t = profile_traces(p);
            const double a = std::exp(0.5 * 1.3);
            CHECK(t.jump().real() ==
                  Approx(a * (std::exp(-0.5 * p.t1 * p.t1) + std::exp(-0.5 * p.t2 * p.t2))).epsilon(1e-14));
            // derivative continuity and the jump condition
            CHECK(std::abs(t.slope_right - t.slope_left) <= 1e-10);
            CHECK(std::abs(t.jump() + g * t.mean_slope()) <= 1e-10);
            CHECK(t.right == profile(p, 1e-300));
        }
    }
    // omega shift scales the amplitude
    auto p0 = stationary_states(3.0, 0.0)[1];
    auto p1 = p0;
    p1.omega = 0.8;
    for (double x : {-2.0, -0.1, 0.4, 5.0}) {
        CHECK(profile(p1, x).real() == Approx(std::exp(0.4) * profile(p0, x).real()).epsilon(1e-14));
    }
}

TEST_CASE("closed-form action against quadrature of the profile") {
    for (double g : {1.0, 2.0, 3.0, 5.0}) {
        for (double w : {-1.0, 0.0, 1.0}) {
            for (const auto& p : stationary_states(g, w)) {
                const double m = oracle::profile_mass(p.t1, p.t2, w);
                CHECK(action_closed_form(p) == Approx(0.5 * m).epsilon(1e-12));
            }
        }
    }
    const auto s2 = stationary_states(2.0, 0.0)[0];
    CHECK(action_closed_form(s2) == Approx(std::exp(1.0) * oracle::gaussian_tail(1.0)).epsilon(1e-13));
    const auto s3 = stationary_states(3.0, 0.0);
    CHECK(action_closed_form(s3[1]) < action_closed_form(s3[0]));
    CHECK(action_closed_form(s3[1]) == Approx(action_closed_form(s3[2])).epsilon(1e-14));
}

TEST_CASE("level bounds") {
    CHECK(d_zero(-1.0) == Approx(std::sqrt(std::numbers::pi) / 4.0).epsilon(1e-15));
    CHECK(d_free(0.3) == Approx(2.0 * d_zero(0.3)).epsilon(1e-15));
    CHECK(d_free(0.0) == Approx(std::exp(1.0) * std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-15));
    CHECK(dgamma_lower_bound(1e8, 0.0) == Approx(0.25 * std::sqrt(0.5 * std::numbers::pi) * std::exp(1.0)).epsilon(1e-12));
    double prev = 0.0;
    for (double g : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const double lb = dgamma_lower_bound(g, 0.0);
        CHECK(lb > prev);
        prev = lb;
        CHECK(lb < d_gamma(g, 0.0));
        CHECK(d_gamma(g, 0.0) < d_zero(0.0));
    }
}

TEST_CASE("params validation") {
    GroundStateParams p{3.0, 0.0, 0.5, 0.5, Branch::Symmetric};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    auto good = stationary_states(3.0, 0.0)[1];
    CHECK_NOTHROW(good.validate());
    good.branch = Branch::AsymmetricRight;
    CHECK_THROWS_AS(good.validate(), std::invalid_argument);
    CHECK(branch_from_string("left") == Branch::AsymmetricLeft);
    CHECK(branch_from_string(to_string(Branch::AsymmetricRight)) == Branch::AsymmetricRight);
    CHECK_THROWS_AS(branch_from_string("middle"), std::invalid_argument);
}

TEST_CASE("bifurcation sweep") {
    for (const auto& pt : bifurcation_sweep(1.0, 1.9, 10, 0.0)) CHECK(pt.branches.size() == 1);
    for (const auto& pt : bifurcation_sweep(2.1, 5.0, 10, 0.0)) {
        CHECK(pt.branches.size() == 3);
        CHECK(pt.actions[1] < pt.actions[0]);
    }
    const auto serial = bifurcation_sweep(1.5, 2.5, 101, 0.0, 1);
    const auto threaded = bifurcation_sweep(1.5, 2.5, 101, 0.0, 4);
    REQUIRE(serial.size() == 101);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].gamma == threaded[i].gamma);
        CHECK(serial[i].actions == threaded[i].actions);
    }
    CHECK(serial[50].branches.size() == 1);
    CHECK(serial[51].branches.size() == 3);
    CHECK_THROWS_AS(bifurcation_sweep(2.0, 1.0, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bifurcation_sweep(1.0, 2.0, 1, 0.0), std::invalid_argument);
}
