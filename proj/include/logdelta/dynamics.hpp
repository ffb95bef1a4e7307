#pragma once

// Time integration of i u_t + u_xx + gamma delta' u + u log|u|^2 = 0 by Strang
// splitting: exact phase rotation for the nonlinear part, Crank-Nicolson for
// the delta-prime Laplacian.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logdelta/corefn.hpp"
#include "logdelta/fields.hpp"
#include "logdelta/stationary.hpp"
#include "logdelta/tridiagonal.hpp"

namespace logdelta {

struct EvolutionConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    /// Regularization of the nonlinearity; nullopt uses the raw logarithm with
    /// the amplitude floor below.
    std::optional<RegularizationLevel> m;
    std::size_t record_every = 100;
    double amplitude_floor = 1e-14;

    /// Number of steps; throws unless t_end is an integer multiple of dt.
    std::size_t steps() const;
};

struct TrajectoryRecord {
    double time = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double orbital_distance_sigma = 0.0;
    /// W-norm distance evaluated at the Sigma-optimal phase.
    double orbital_distance_w = 0.0;
    /// Sigma-optimal phase minus omega_reference * t, wrapped to (-pi, pi].
    double phase_lag = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    Field final_state;
};

class NonFiniteStateError : public std::runtime_error {
public:
    NonFiniteStateError(std::size_t step, std::optional<TrajectoryRecord> last)
        : std::runtime_error("non-finite state at step " + std::to_string(step)),
          step_(step),
          last_(last) {}
    std::size_t step() const noexcept { return step_; }
    const std::optional<TrajectoryRecord>& last_record() const noexcept { return last_; }

private:
    std::size_t step_;
    std::optional<TrajectoryRecord> last_;
};

/// Cayley transform (1 + i dt/2 H)^{-1} (1 - i dt/2 H), factored once.
class LinearPropagator {
public:
    LinearPropagator(const Grid& grid, double gamma, double dt);
    void apply(Field& u) const;
    double dt() const noexcept { return dt_; }

private:
    Tridiagonal<double> h_;
    TridiagonalFactor<Complex> lhs_;
    double dt_;
    mutable std::vector<Complex> scratch_;
};

Field linear_step(const Field& u, double gamma, double dt);

/// u exp(i dt rate(|u|)) pointwise: rate = log max(|u|, floor)^2, or the
/// g_m rate when a regularization level is given.
Field nonlinear_step(const Field& u, double dt, std::optional<RegularizationLevel> m = std::nullopt,
                     double amplitude_floor = 1e-14);

/// One Strang step N(dt/2) L(dt) N(dt/2). Any real dt; a negative dt undoes
/// the step with -dt.
Field strang_step(const Field& u, double gamma, double dt,
                  std::optional<RegularizationLevel> m = std::nullopt, double amplitude_floor = 1e-14);

/// ½(|form| + |entropy|), the scale against which energy drift is measured.
double energy_scale(const Field& u, double gamma);

using SnapshotCallback = std::function<void(std::size_t record_index, double time, const Field&)>;

/// Strang splitting from u0 over config.steps() steps. Records every
/// record_every steps (and at t = 0 and t_end). With a reference profile the
/// orbital distances to its phase orbit are recorded (0 otherwise).
Trajectory evolve(const Field& u0, double gamma, double omega_reference,
                  const EvolutionConfig& config,
                  const std::optional<GroundStateParams>& reference = std::nullopt,
                  const SnapshotCallback& on_record = {});

struct StabilityOptions {
    double gamma = 2.0;
    double omega = 0.0;
    Branch branch = Branch::Symmetric;
    double perturbation_size = 1e-2;  // relative to ||phi||_Sigma
    double t_end = 50.0;
    std::size_t trials = 8;
    std::uint64_t rng_seed = 12345;
    double half_width = 20.0;
    std::size_t nodes = 4096;
    double dt = 1e-3;
    std::size_t record_every = 100;
    std::optional<RegularizationLevel> m;
    unsigned threads = 1;
};

struct StabilityTrial {
    std::uint64_t seed = 0;
    double initial_distance = 0.0;
    double max_distance = 0.0;
    double ratio = 0.0;
    double initial_distance_w = 0.0;
    double max_distance_w = 0.0;
    double mass_drift = 0.0;
};

struct StabilitySummary {
    StabilityOptions options;
    GroundStateParams state;
    std::vector<StabilityTrial> trials;
    double max_ratio = 0.0;
    double max_ratio_w = 0.0;
    /// Symmetric branch past the bifurcation: an excited state, no stability claim.
    bool exploratory = false;
};

/// Sum of five Gaussian bumps with complex amplitudes, centers in [-5, 5] and
/// widths in [0.5, 2], scaled to the requested Sigma norm.
Field random_perturbation(const Grid& grid, std::uint64_t seed, double sigma_norm_target);

/// Per-trial seed derived from the experiment seed by counter.
std::uint64_t trial_seed(std::uint64_t rng_seed, std::size_t trial);

StabilitySummary stability_experiment(const StabilityOptions& options);

}  // namespace logdelta
