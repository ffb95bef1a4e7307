#pragma once

// Standing waves phi^{t1,t2}_omega of the delta-prime problem: the (t1, t2)
// system, its auxiliary functions, closed-form actions, and the bounds on the
// ground-state level.

#include <string>
#include <utility>
#include <vector>

#include "logdelta/grid.hpp"

namespace logdelta {

enum class Branch { Symmetric, AsymmetricLeft, AsymmetricRight };

std::string to_string(Branch b);
Branch branch_from_string(const std::string& name);

/// One stationary profile. AsymmetricLeft carries t1 < t2 (more mass on x > 0),
/// AsymmetricRight the mirrored pair.
struct GroundStateParams {
    double gamma = 2.0;
    double omega = 0.0;
    double t1 = 1.0;
    double t2 = 1.0;
    Branch branch = Branch::Symmetric;

    /// Residuals of t1 e^{-t1^2/2} = t2 e^{-t2^2/2} and 1/t1 + 1/t2 = gamma.
    std::pair<double, double> residuals() const;
    /// Throws std::invalid_argument unless both residuals are <= 1e-10 and the
    /// branch tag is consistent with the pair.
    void validate() const;
};

struct BifurcationPoint {
    double gamma = 0.0;
    std::vector<GroundStateParams> branches;
    std::vector<double> actions;
};

/// f(t) = t e^{-t^2/2}; the first (t1, t2) equation reads f(t1) = f(t2).
double pair_balance(double t);

/// h(t) = (t+1)^2 (1 - 1/t^2) - gamma^2 log(t^2), t > 0.
double eval_h(double t, double gamma);

/// All positive solutions of the (t1, t2) system: [(2/g, 2/g)] for g <= 2, and
/// additionally the two mirrored asymmetric pairs (small, large), (large, small)
/// for g > 2.
std::vector<std::pair<double, double>> solve_3s(double gamma);

/// Stationary profiles for every solution of solve_3s, tagged by branch.
std::vector<GroundStateParams> stationary_states(double gamma, double omega);

/// t / (gamma t - 1), an involution on (1/gamma, inf).
double sigma_map(double t, double gamma);

/// Gamma(t) + Gamma(sigma(t)).
double n_gamma(double t, double gamma);

/// phi^{t1,t2}_omega(x) for x != 0, phase theta = 0.
Complex profile(const GroundStateParams& params, double x);

/// Exact one-sided limits of the profile and its derivative at x = 0.
Traces profile_traces(const GroundStateParams& params);

Field sample_profile(const GroundStateParams& params, const Grid& grid);

/// S_{omega,gamma} of the profile = mass/2 = e^{omega+1} n_gamma(t1) / 2.
double action_closed_form(const GroundStateParams& params);

/// Lower bound (1/4) sqrt(pi/2) e^{omega+1} e^{-8/gamma^2}.
double dgamma_lower_bound(double gamma, double omega);

/// Half-line level d^0(omega) = e^{omega+1} sqrt(pi) / 4.
double d_zero(double omega);

/// Free-line level d(omega) = e^{omega+1} sqrt(pi) / 2.
double d_free(double omega);

/// d_gamma(omega): the least action over all stationary states.
double d_gamma(double gamma, double omega);

/// Branch data at one gamma (handles any gamma > 0).
BifurcationPoint bifurcation_point(double gamma, double omega);

/// Uniform sweep of `steps` points over [gamma_min, gamma_max]. Points are
/// evaluated on up to `threads` worker threads; the result order is the grid order.
std::vector<BifurcationPoint> bifurcation_sweep(double gamma_min, double gamma_max,
                                                std::size_t steps, double omega,
                                                unsigned threads = 1);

}  // namespace logdelta
