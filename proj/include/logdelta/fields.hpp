#pragma once

// Functionals of the delta-prime logarithmic problem on the broken line, the
// Nehari projection, stationary residuals, orbital distances and a
// projected-gradient minimizer for the ground-state level d_gamma(omega).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logdelta/corefn.hpp"
#include "logdelta/grid.hpp"
#include "logdelta/tridiagonal.hpp"

namespace logdelta {

/// Discrete H_gamma = -d^2/dx^2 with the delta-prime coupling.
///
/// The interaction enters through the edge between x = -dx/2 and x = +dx/2.
/// Taking a common slope p on the two half cells and imposing
/// u(0+) - u(0-) = -gamma p gives p = (u_+ - u_-) / (dx - gamma), and the
/// half cells then contribute |u_+ - u_-|^2 / (dx - gamma) to the form. Every
/// other edge carries the usual weight 1/dx; Dirichlet ends use the half-cell
/// weight 2/dx.
Tridiagonal<double> delta_prime_hamiltonian(const Grid& grid, double gamma);

/// H u with the matrix above.
Field apply_hamiltonian(const Field& u, double gamma);

/// t_gamma[u] = dx <u, H u>: integral of |u'|^2 minus the jump term.
double quadratic_form(const Field& u, double gamma);

/// ||u'||^2 on R \ {0} (both sides, no coupling across the interface).
double derivative_norm_sq(const Field& u);

double mass(const Field& u);
/// Integral of |u|^2 log |u|^2, integrand 0 where u = 0.
double entropy(const Field& u);

/// Sigma = H^1(R \ {0}) norm: sqrt(mass + ||u'||^2).
double sigma_norm(const Field& u);

/// Real Sigma inner product (u, v) including the derivative part, returned
/// as the complex sum so callers can read off the optimal phase.
Complex sigma_inner(const Field& u, const Field& v);

struct FunctionalReport {
    double form = 0.0;     // t_gamma[u]
    double mass = 0.0;     // ||u||^2
    double entropy = 0.0;  // integral |u|^2 log|u|^2
    double energy = 0.0;   // E = form/2 - entropy/2
    double action = 0.0;   // S = form/2 + (omega+1)/2 mass - entropy/2
    double nehari = 0.0;   // I = form + omega mass - entropy
};

FunctionalReport report(const Field& u, double gamma, double omega);

/// E(u) = form/2 - entropy/2; with a regularization level, the energy of the
/// regularized flow, shifted by mass/2 so both agree when 1/m <= |u| <= m.
double energy(const Field& u, double gamma, std::optional<RegularizationLevel> m = std::nullopt);

/// L^2 gradient of S_{omega,gamma}: H u + omega u - u log|u|^2.
Field action_gradient(const Field& u, double gamma, double omega);

/// lambda u with lambda = exp(I / (2 mass)). Throws on a zero field.
Field nehari_project(const Field& u, double gamma, double omega);

struct StationaryResidual {
    double interior = 0.0;  // max |-u'' + omega u - u log|u|^2| away from 0 and +-L
    double bc1 = 0.0;       // |u'(0+) - u'(0-)|
    double bc2 = 0.0;       // |u(0+) - u(0-) + gamma u'(0)|
};

StationaryResidual stationary_residual(const Field& u, double gamma, double omega);

enum class DistanceMetric { SigmaOnly, FullW };

/// inf over theta of ||u - e^{i theta} phi|| in the chosen metric.
double orbital_distance(const Field& u, const Field& phi, DistanceMetric metric);

/// Sigma-optimal phase arg (u, phi)_Sigma.
double optimal_phase(const Field& u, const Field& phi);

/// ||u - e^{i theta} phi||_Sigma + ||u - e^{i theta} phi||_{L^A} at a fixed phase.
double w_distance_at(const Field& u, const Field& phi, double theta);

// ---------------------------------------------------------------------------
// Minimization of d_gamma(omega) over the Nehari manifold.

enum class SeedKind { SymmetricGuess, LeftGuess, RightGuess, Custom };

struct Seed {
    SeedKind kind = SeedKind::SymmetricGuess;
    std::optional<Field> custom;

    static Seed symmetric() { return {SeedKind::SymmetricGuess, std::nullopt}; }
    static Seed left() { return {SeedKind::LeftGuess, std::nullopt}; }
    static Seed right() { return {SeedKind::RightGuess, std::nullopt}; }
    static Seed from_field(Field f) { return {SeedKind::Custom, std::move(f)}; }
};

struct MinimizeOptions {
    double half_width = 20.0;
    std::size_t nodes = 4096;
    std::size_t max_iter = 20000;
    double value_tol = 1e-10;     // relative change of mass/2 between iterations
    double residual_tol = 1e-8;   // preconditioned gradient, relative to max|u|
    bool enforce_odd = false;     // project onto u(-x) = -u(x) after every step
};

struct MinimizeResult {
    Field field;
    double value = 0.0;  // mass/2 = S on the Nehari manifold
    std::size_t iterations = 0;
    StationaryResidual residual;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, MinimizeResult last)
        : std::runtime_error(what), last_(std::move(last)) {}
    const MinimizeResult& last() const noexcept { return last_; }

private:
    MinimizeResult last_;
};

/// Initial guess for a seed kind on the given grid (before projection).
Field seed_field(const Grid& grid, SeedKind kind);

/// Projected preconditioned gradient descent: step along -(H + c)^{-1} grad S,
/// rescale back onto the Nehari manifold, accept if S decreased. The step
/// length starts from a Barzilai-Borwein estimate and is halved on failure.
MinimizeResult minimize_dgamma(double gamma, double omega, const Seed& seed,
                               const MinimizeOptions& opts = {});

}  // namespace logdelta
