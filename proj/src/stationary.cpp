#include "logdelta/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "logdelta/corefn.hpp"
#include "logdelta/parallel.hpp"

namespace logdelta {

namespace {

constexpr double kResidualTol = 1e-10;

void check_positive_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw std::invalid_argument("gamma must be positive (attractive interaction)");
    }
}

double amplitude(double omega) { return std::exp(0.5 * (omega + 1.0)); }

// Unique zero of h on (1, inf) for gamma > 2, by bisection after doubling the
// upper end until h changes sign.
double h_root(double gamma) {
    double lo = 1.0 + 1e-9;
    while (eval_h(lo, gamma) >= 0.0 && lo - 1.0 > 1e-15) lo = 1.0 + (lo - 1.0) * 1e-2;
    if (eval_h(lo, gamma) >= 0.0) return 1.0;
    double hi = 2.0;
    while (eval_h(hi, gamma) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval_h(mid, gamma) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(Branch b) {
    switch (b) {
        case Branch::Symmetric: return "symmetric";
        case Branch::AsymmetricLeft: return "asymmetric_left";
        case Branch::AsymmetricRight: return "asymmetric_right";
    }
    return "unknown";
}

Branch branch_from_string(const std::string& name) {
    if (name == "symmetric") return Branch::Symmetric;
    if (name == "asymmetric_left" || name == "left") return Branch::AsymmetricLeft;
    if (name == "asymmetric_right" || name == "right") return Branch::AsymmetricRight;
    throw std::invalid_argument("unknown branch '" + name + "'");
}

std::pair<double, double> GroundStateParams::residuals() const {
    return {std::abs(pair_balance(t1) - pair_balance(t2)), std::abs(1.0 / t1 + 1.0 / t2 - gamma)};
}

void GroundStateParams::validate() const {
    check_positive_gamma(gamma);
    if (!std::isfinite(omega)) throw std::invalid_argument("omega must be finite");
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("t1, t2 must be positive");
    const auto [r1, r2] = residuals();
    if (r1 > kResidualTol || r2 > kResidualTol) {
        throw std::invalid_argument("(t1, t2) does not solve the system");
    }
    const bool symmetric = std::abs(t1 - t2) <= kResidualTol;
    switch (branch) {
        case Branch::Symmetric:
            if (!symmetric) throw std::invalid_argument("symmetric branch requires t1 = t2");
            break;
        case Branch::AsymmetricLeft:
            if (symmetric || t1 > t2) throw std::invalid_argument("left branch requires t1 < t2");
            break;
        case Branch::AsymmetricRight:
            if (symmetric || t1 < t2) throw std::invalid_argument("right branch requires t1 > t2");
            break;
    }
}

double pair_balance(double t) { return t * std::exp(-0.5 * t * t); }

double eval_h(double t, double gamma) {
    if (!(t > 0.0)) throw std::invalid_argument("eval_h: t must be positive");
    return (t + 1.0) * (t + 1.0) * (1.0 - 1.0 / (t * t)) - gamma * gamma * std::log(t * t);
}

std::vector<std::pair<double, double>> solve_3s(double gamma) {
    check_positive_gamma(gamma);
    const double t_star = 2.0 / gamma;
    std::vector<std::pair<double, double>> out{{t_star, t_star}};
    if (gamma <= 2.0) return out;

    // With z = t2/t1 = gamma t2 - 1 the system reduces to h(z) = 0.
    const double z0 = h_root(gamma);
    const double large = (z0 + 1.0) / gamma;
    const double small = (z0 + 1.0) / (gamma * z0);
    if (std::abs(pair_balance(small) - pair_balance(large)) > kResidualTol ||
        std::abs(1.0 / small + 1.0 / large - gamma) > kResidualTol) {
        throw std::runtime_error("solve_3s: asymmetric root failed the residual check");
    }
    out.emplace_back(small, large);
    out.emplace_back(large, small);
    return out;
}

std::vector<GroundStateParams> stationary_states(double gamma, double omega) {
    const auto pairs = solve_3s(gamma);
    std::vector<GroundStateParams> states;
    states.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Branch b = i == 0 ? Branch::Symmetric
                                : (i == 1 ? Branch::AsymmetricLeft : Branch::AsymmetricRight);
        states.push_back({gamma, omega, pairs[i].first, pairs[i].second, b});
    }
    return states;
}

double sigma_map(double t, double gamma) {
    check_positive_gamma(gamma);
    if (!(t > 1.0 / gamma)) throw std::invalid_argument("sigma_map: t must exceed 1/gamma");
    return t / (gamma * t - 1.0);
}

double n_gamma(double t, double gamma) { return gamma_tail(t) + gamma_tail(sigma_map(t, gamma)); }

Complex profile(const GroundStateParams& p, double x) {
    if (x == 0.0) throw std::invalid_argument("profile is undefined at x = 0; use profile_traces");
    const double a = amplitude(p.omega);
    if (x > 0.0) return {a * std::exp(-0.5 * (x + p.t1) * (x + p.t1)), 0.0};
    return {-a * std::exp(-0.5 * (x - p.t2) * (x - p.t2)), 0.0};
}

Traces profile_traces(const GroundStateParams& p) {
    const double a = amplitude(p.omega);
    const double er = std::exp(-0.5 * p.t1 * p.t1);
    const double el = std::exp(-0.5 * p.t2 * p.t2);
    Traces t;
    t.right = a * er;
    t.left = -a * el;
    t.slope_right = -p.t1 * a * er;
    t.slope_left = -p.t2 * a * el;
    return t;
}

Field sample_profile(const GroundStateParams& params, const Grid& grid) {
    return Field::sample(grid, [&](double x) { return profile(params, x); });
}

double action_closed_form(const GroundStateParams& params) {
    params.validate();
    // The profile carries mass e^{omega+1} (Gamma(t1) + Gamma(t2)) and lies on the
    // Nehari manifold, where S = mass / 2.
    return 0.5 * std::exp(params.omega + 1.0) * n_gamma(params.t1, params.gamma);
}

double dgamma_lower_bound(double gamma, double omega) {
    check_positive_gamma(gamma);
    return 0.25 * std::sqrt(0.5 * std::numbers::pi) * std::exp(omega + 1.0) *
           std::exp(-8.0 / (gamma * gamma));
}

double d_zero(double omega) { return 0.25 * std::exp(omega + 1.0) / std::numbers::inv_sqrtpi; }

double d_free(double omega) { return 0.5 * std::exp(omega + 1.0) / std::numbers::inv_sqrtpi; }

BifurcationPoint bifurcation_point(double gamma, double omega) {
    BifurcationPoint pt;
    pt.gamma = gamma;
    pt.branches = stationary_states(gamma, omega);
    for (const auto& b : pt.branches) pt.actions.push_back(action_closed_form(b));
    return pt;
}

double d_gamma(double gamma, double omega) {
    const BifurcationPoint pt = bifurcation_point(gamma, omega);
    double best = pt.actions.front();
    for (double a : pt.actions) best = std::min(best, a);
    return best;
}

std::vector<BifurcationPoint> bifurcation_sweep(double gamma_min, double gamma_max,
                                                std::size_t steps, double omega,
                                                unsigned threads) {
    if (!(gamma_min > 0.0) || !(gamma_max > gamma_min) || !std::isfinite(gamma_max)) {
        throw std::invalid_argument("bifurcation_sweep: need 0 < gamma_min < gamma_max");
    }
    if (steps < 2) throw std::invalid_argument("bifurcation_sweep: need at least 2 steps");
    if (!std::isfinite(omega)) throw std::invalid_argument("omega must be finite");
    std::vector<BifurcationPoint> out(steps);
    const double dg = (gamma_max - gamma_min) / static_cast<double>(steps - 1);
    parallel_for(steps, threads, [&](std::size_t i) {
        const double g = i + 1 == steps ? gamma_max : gamma_min + dg * static_cast<double>(i);
        out[i] = bifurcation_point(g, omega);
    });
    return out;
}

}  // namespace logdelta
