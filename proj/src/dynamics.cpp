#include "logdelta/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "logdelta/parallel.hpp"

namespace logdelta {

namespace {

double wrap_phase(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

// In-place exact nonlinear flow; returns false if a non-finite sample is met.
bool rotate_in_place(std::span<Complex> u, double dt, const std::optional<RegularizationLevel>& m,
                     double floor_sq) {
    bool finite = true;
    for (Complex& v : u) {
        const double r2 = std::norm(v);
        if (!std::isfinite(r2)) {
            finite = false;
            continue;
        }
        if (r2 == 0.0) continue;
        const double rate = m ? gm_rate(std::sqrt(r2), *m) : std::log(std::max(r2, floor_sq));
        v *= std::polar(1.0, dt * rate);
    }
    return finite;
}

}  // namespace

std::size_t EvolutionConfig::steps() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
    if (record_every == 0) throw std::invalid_argument("record_every must be positive");
    const double count = std::round(t_end / dt);
    if (count < 1.0 || std::abs(count * dt - t_end) > 1e-9 * t_end) {
        throw std::invalid_argument("t_end must be an integer multiple of dt");
    }
    return static_cast<std::size_t>(count);
}

LinearPropagator::LinearPropagator(const Grid& grid, double gamma, double dt)
    : h_(delta_prime_hamiltonian(grid, gamma)),
      lhs_([&] {
          Tridiagonal<Complex> a;
          const Complex factor(0.0, 0.5 * dt);
          a.diag.resize(h_.diag.size());
          a.off.resize(h_.off.size());
          for (std::size_t j = 0; j < a.diag.size(); ++j) a.diag[j] = 1.0 + factor * h_.diag[j];
          for (std::size_t j = 0; j < a.off.size(); ++j) a.off[j] = factor * h_.off[j];
          return TridiagonalFactor<Complex>(a);
      }()),
      dt_(dt),
      scratch_(grid.size()) {}

void LinearPropagator::apply(Field& u) const {
    // rhs = (1 - i dt/2 H) u
    h_.multiply<Complex>(u.values(), scratch_);
    const Complex factor(0.0, -0.5 * dt_);
    auto vals = u.values();
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] += factor * scratch_[j];
    lhs_.solve<Complex>(vals);
}

Field linear_step(const Field& u, double gamma, double dt) {
    if (!std::isfinite(dt)) throw std::invalid_argument("dt must be finite");
    if (dt == 0.0) {
        delta_prime_hamiltonian(u.grid(), gamma);  // validates gamma
        return u;
    }
    Field out = u;
    LinearPropagator(u.grid(), gamma, dt).apply(out);
    return out;
}

Field nonlinear_step(const Field& u, double dt, std::optional<RegularizationLevel> m,
                     double amplitude_floor) {
    Field out = u;
    rotate_in_place(out.values(), dt, m, amplitude_floor * amplitude_floor);
    return out;
}

Field strang_step(const Field& u, double gamma, double dt, std::optional<RegularizationLevel> m,
                  double amplitude_floor) {
    Field out = nonlinear_step(u, 0.5 * dt, m, amplitude_floor);
    out = linear_step(out, gamma, dt);
    return nonlinear_step(out, 0.5 * dt, m, amplitude_floor);
}

double energy_scale(const Field& u, double gamma) {
    return 0.5 * (std::abs(quadratic_form(u, gamma)) + std::abs(entropy(u)));
}

Trajectory evolve(const Field& u0, double gamma, double omega_reference,
                  const EvolutionConfig& config, const std::optional<GroundStateParams>& reference,
                  const SnapshotCallback& on_record) {
    const std::size_t steps = config.steps();
    if (!u0.all_finite()) throw NonFiniteStateError(0, std::nullopt);
    const double floor_sq = config.amplitude_floor * config.amplitude_floor;

    std::optional<Field> phi;
    if (reference) {
        reference->validate();
        phi = sample_profile(*reference, u0.grid());
    }

    Trajectory traj{{}, u0};
    Field& u = traj.final_state;
    const LinearPropagator propagator(u.grid(), gamma, config.dt);

    auto record = [&](std::size_t step) {
        TrajectoryRecord r;
        r.time = static_cast<double>(step) * config.dt;
        r.mass = mass(u);
        r.energy = energy(u, gamma, config.m);
        if (phi) {
            const double theta = optimal_phase(u, *phi);
            r.orbital_distance_sigma = orbital_distance(u, *phi, DistanceMetric::SigmaOnly);
            r.orbital_distance_w = w_distance_at(u, *phi, theta);
            r.phase_lag = wrap_phase(theta - omega_reference * r.time);
        }
        traj.records.push_back(r);
        if (on_record) on_record(traj.records.size() - 1, r.time, u);
    };
    auto last_record = [&]() -> std::optional<TrajectoryRecord> {
        if (traj.records.empty()) return std::nullopt;
        return traj.records.back();
    };

    record(0);
    // Consecutive half nonlinear substeps merge into one full rotation except
    // around recorded steps.
    bool ok = rotate_in_place(u.values(), 0.5 * config.dt, config.m, floor_sq);
    for (std::size_t step = 1; step <= steps; ++step) {
        if (!ok) throw NonFiniteStateError(step - 1, last_record());
        propagator.apply(u);
        const bool at_record = step % config.record_every == 0 || step == steps;
        if (at_record) {
            ok = rotate_in_place(u.values(), 0.5 * config.dt, config.m, floor_sq);
            if (!ok || !u.all_finite()) throw NonFiniteStateError(step, last_record());
            record(step);
            if (step < steps) ok = rotate_in_place(u.values(), 0.5 * config.dt, config.m, floor_sq);
        } else {
            ok = rotate_in_place(u.values(), config.dt, config.m, floor_sq);
        }
    }
    return traj;
}

std::uint64_t trial_seed(std::uint64_t rng_seed, std::size_t trial) {
    // splitmix64 of (seed + counter)
    std::uint64_t z = rng_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Field random_perturbation(const Grid& grid, std::uint64_t seed, double sigma_norm_target) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(-5.0, 5.0);
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::normal_distribution<double> amp(0.0, 1.0);
    struct Bump {
        double c, w;
        Complex a;
    };
    std::vector<Bump> bumps;
    for (int i = 0; i < 5; ++i) {
        const double c = center(rng);
        const double w = width(rng);
        const double re = amp(rng);
        const double im = amp(rng);
        bumps.push_back({c, w, {re, im}});
    }
    Field f = Field::sample(grid, [&](double x) {
        Complex s(0.0, 0.0);
        for (const auto& b : bumps) s += b.a * std::exp(-0.5 * (x - b.c) * (x - b.c) / (b.w * b.w));
        return s;
    });
    const double norm = sigma_norm(f);
    if (norm > 0.0) f *= Complex(sigma_norm_target / norm, 0.0);
    return f;
}

StabilitySummary stability_experiment(const StabilityOptions& opt) {
    if (!(opt.perturbation_size >= 0.0)) throw std::invalid_argument("perturbation size must be >= 0");
    if (opt.trials == 0) throw std::invalid_argument("need at least one trial");

    StabilitySummary summary;
    summary.options = opt;
    const auto states = stationary_states(opt.gamma, opt.omega);
    auto it = std::find_if(states.begin(), states.end(),
                           [&](const GroundStateParams& s) { return s.branch == opt.branch; });
    if (it == states.end()) {
        throw std::invalid_argument("branch " + to_string(opt.branch) +
                                    " does not exist at this gamma (asymmetric needs gamma > 2)");
    }
    summary.state = *it;
    summary.exploratory = opt.branch == Branch::Symmetric && opt.gamma > 2.0;

    const Grid grid(opt.half_width, opt.nodes);
    const Field phi = sample_profile(summary.state, grid);
    const double target = opt.perturbation_size * sigma_norm(phi);

    EvolutionConfig cfg;
    cfg.dt = opt.dt;
    cfg.t_end = opt.t_end;
    cfg.m = opt.m;
    cfg.record_every = opt.record_every;

    summary.trials.resize(opt.trials);
    parallel_for(opt.trials, opt.threads, [&](std::size_t i) {
        StabilityTrial& trial = summary.trials[i];
        trial.seed = trial_seed(opt.rng_seed, i);
        const Field u0 = phi + random_perturbation(grid, trial.seed, target);
        const Trajectory traj = evolve(u0, opt.gamma, opt.omega, cfg, summary.state);
        trial.initial_distance = traj.records.front().orbital_distance_sigma;
        trial.initial_distance_w = traj.records.front().orbital_distance_w;
        const double m0 = traj.records.front().mass;
        for (const auto& r : traj.records) {
            trial.max_distance = std::max(trial.max_distance, r.orbital_distance_sigma);
            trial.max_distance_w = std::max(trial.max_distance_w, r.orbital_distance_w);
            trial.mass_drift = std::max(trial.mass_drift, std::abs(r.mass - m0) / m0);
        }
        trial.ratio = trial.initial_distance > 0.0 ? trial.max_distance / trial.initial_distance : 0.0;
    });
    for (const auto& t : summary.trials) {
        summary.max_ratio = std::max(summary.max_ratio, t.ratio);
        if (t.initial_distance_w > 0.0) {
            summary.max_ratio_w = std::max(summary.max_ratio_w, t.max_distance_w / t.initial_distance_w);
        }
    }
    return summary;
}

}  // namespace logdelta
