#include "logdelta/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace logdelta {

namespace {

void check_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma == 0.0) {
        throw std::invalid_argument("gamma must be finite and nonzero");
    }
}

double interface_weight(const Grid& grid, double gamma) {
    check_gamma(gamma);
    const double denom = grid.dx() - gamma;
    if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(gamma))) {
        throw std::invalid_argument("grid spacing coincides with gamma; interface closure is singular");
    }
    return 1.0 / denom;
}

void check_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

double log_abs_sq(Complex v) {
    const double r2 = std::norm(v);
    return r2 > 0.0 ? std::log(r2) : 0.0;
}

Field odd_part(const Field& u) {
    Field m = mirrored(u);
    Field out(u.grid());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = 0.5 * (u[j] - m[j]);
    return out;
}

double max_abs(const Field& u) {
    double peak = 0.0;
    for (const Complex& v : u.values()) peak = std::max(peak, std::abs(v));
    return peak;
}

double real_dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] * std::conj(b[j])).real();
    return s * a.dx();
}

}  // namespace

Tridiagonal<double> delta_prime_hamiltonian(const Grid& grid, double gamma) {
    const std::size_t n = grid.size();
    const std::size_t k = grid.interface_index();
    const double dx = grid.dx();
    const double w_interface = interface_weight(grid, gamma);

    std::vector<double> weight(n - 1, 1.0 / dx);
    weight[k - 1] = w_interface;

    Tridiagonal<double> h;
    h.diag.assign(n, 0.0);
    h.off.assign(n - 1, 0.0);
    for (std::size_t e = 0; e + 1 < n; ++e) {
        h.diag[e] += weight[e] / dx;
        h.diag[e + 1] += weight[e] / dx;
        h.off[e] = -weight[e] / dx;
    }
    h.diag[0] += 2.0 / (dx * dx);
    h.diag[n - 1] += 2.0 / (dx * dx);
    return h;
}

Field apply_hamiltonian(const Field& u, double gamma) {
    const auto h = delta_prime_hamiltonian(u.grid(), gamma);
    Field out(u.grid());
    h.multiply<Complex>(u.values(), out.values());
    return out;
}

double quadratic_form(const Field& u, double gamma) {
    const Grid& g = u.grid();
    const std::size_t n = g.size();
    const std::size_t k = g.interface_index();
    const double dx = g.dx();
    const double w_interface = interface_weight(g, gamma);

    double sum = 0.0;
    for (std::size_t e = 0; e + 1 < n; ++e) {
        if (e == k - 1) continue;
        sum += std::norm(u[e + 1] - u[e]);
    }
    sum /= dx;
    sum += 2.0 * (std::norm(u[0]) + std::norm(u[n - 1])) / dx;
    sum += w_interface * std::norm(u[k] - u[k - 1]);
    return sum;
}

double derivative_norm_sq(const Field& u) {
    return sigma_inner(u, u).real() - mass(u);
}

double mass(const Field& u) {
    double s = 0.0;
    for (const Complex& v : u.values()) s += std::norm(v);
    return s * u.dx();
}

double entropy(const Field& u) {
    double s = 0.0;
    for (const Complex& v : u.values()) {
        const double r2 = std::norm(v);
        if (r2 > 0.0) s += r2 * std::log(r2);
    }
    return s * u.dx();
}

Complex sigma_inner(const Field& u, const Field& v) {
    check_same_grid(u, v);
    const Grid& g = u.grid();
    const std::size_t n = g.size();
    const std::size_t k = g.interface_index();
    const double dx = g.dx();

    Complex values(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) values += u[j] * std::conj(v[j]);
    values *= dx;

    Complex slopes(0.0, 0.0);
    for (std::size_t e = 0; e + 1 < n; ++e) {
        if (e == k - 1) continue;
        slopes += (u[e + 1] - u[e]) * std::conj(v[e + 1] - v[e]);
    }
    slopes /= dx;
    slopes += 2.0 * (u[0] * std::conj(v[0]) + u[n - 1] * std::conj(v[n - 1])) / dx;
    // Half cells adjacent to x = 0, using the one-sided trace slopes.
    const Traces tu = u.traces();
    const Traces tv = v.traces();
    slopes += 0.5 * dx *
              (tu.slope_right * std::conj(tv.slope_right) + tu.slope_left * std::conj(tv.slope_left));
    return values + slopes;
}

double sigma_norm(const Field& u) { return std::sqrt(std::max(0.0, sigma_inner(u, u).real())); }

FunctionalReport report(const Field& u, double gamma, double omega) {
    FunctionalReport r;
    r.form = quadratic_form(u, gamma);
    r.mass = mass(u);
    r.entropy = entropy(u);
    r.energy = 0.5 * r.form - 0.5 * r.entropy;
    r.action = 0.5 * r.form + 0.5 * (omega + 1.0) * r.mass - 0.5 * r.entropy;
    r.nehari = r.form + omega * r.mass - r.entropy;
    return r;
}

double energy(const Field& u, double gamma, std::optional<RegularizationLevel> m) {
    const double form = quadratic_form(u, gamma);
    if (!m) return 0.5 * form - 0.5 * entropy(u);
    double potential = 0.0;
    for (const Complex& v : u.values()) potential += eval_Gm(std::abs(v), *m);
    potential *= u.dx();
    return 0.5 * form - potential - 0.5 * mass(u);
}

Field action_gradient(const Field& u, double gamma, double omega) {
    Field g = apply_hamiltonian(u, gamma);
    for (std::size_t j = 0; j < u.size(); ++j) g[j] += (omega - log_abs_sq(u[j])) * u[j];
    return g;
}

Field nehari_project(const Field& u, double gamma, double omega) {
    const double m = mass(u);
    if (!(m > 0.0)) throw std::invalid_argument("nehari_project: zero field has no projection");
    const FunctionalReport r = report(u, gamma, omega);
    const double lambda = std::exp(r.nehari / (2.0 * m));
    if (!std::isfinite(lambda) || lambda == 0.0) {
        throw std::domain_error("nehari_project: scaling factor out of range");
    }
    return Complex(lambda, 0.0) * u;
}

StationaryResidual stationary_residual(const Field& u, double gamma, double omega) {
    check_gamma(gamma);
    const Grid& g = u.grid();
    const std::size_t n = g.size();
    const std::size_t k = g.interface_index();
    const double inv_dx2 = 1.0 / (g.dx() * g.dx());

    StationaryResidual res;
    auto scan = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j <= hi; ++j) {
            const Complex lap = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_dx2;
            const Complex r = -lap + (omega - log_abs_sq(u[j])) * u[j];
            res.interior = std::max(res.interior, std::abs(r));
        }
    };
    if (k >= 5) {
        scan(2, k - 3);
        scan(k + 2, n - 3);
    }
    const Traces t = u.traces();
    res.bc1 = std::abs(t.slope_right - t.slope_left);
    res.bc2 = std::abs(t.jump() + gamma * t.mean_slope());
    return res;
}

double optimal_phase(const Field& u, const Field& phi) {
    const Complex c = sigma_inner(u, phi);
    return std::abs(c) > 0.0 ? std::arg(c) : 0.0;
}

double w_distance_at(const Field& u, const Field& phi, double theta) {
    check_same_grid(u, phi);
    Field diff = u - std::polar(1.0, theta) * phi;
    return sigma_norm(diff) + luxemburg_norm(diff.values(), diff.dx());
}

double orbital_distance(const Field& u, const Field& phi, DistanceMetric metric) {
    check_same_grid(u, phi);
    const double theta_star = optimal_phase(u, phi);
    if (metric == DistanceMetric::SigmaOnly) {
        return sigma_norm(u - std::polar(1.0, theta_star) * phi);
    }
    // Golden-section refinement of the W distance around the Sigma-optimal phase.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = theta_star - 0.5;
    double b = theta_star + 0.5;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = w_distance_at(u, phi, c);
    double fd = w_distance_at(u, phi, d);
    while (b - a > 1e-7) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = w_distance_at(u, phi, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = w_distance_at(u, phi, d);
        }
    }
    return std::min({w_distance_at(u, phi, theta_star), fc, fd});
}

Field seed_field(const Grid& grid, SeedKind kind) {
    double right = 1.0;
    double left = 1.0;
    switch (kind) {
        case SeedKind::SymmetricGuess: break;
        case SeedKind::LeftGuess: left = 0.4; break;
        case SeedKind::RightGuess: right = 0.4; break;
        case SeedKind::Custom:
            throw std::invalid_argument("custom seeds carry their own field");
    }
    return Field::sample(grid, [&](double x) {
        if (x > 0.0) return Complex(right * std::exp(-(x + 0.5) * (x + 0.5) / 3.0), 0.0);
        return Complex(-left * std::exp(-(x - 0.5) * (x - 0.5) / 3.0), 0.0);
    });
}

namespace {

// (H + diag(shift_j)) with shift_j = c + max(0, omega - log|u_j|^2), clamped;
// SPD once c exceeds the single negative eigenvalue of H.
TridiagonalFactor<double> build_preconditioner(const Tridiagonal<double>& h, const Field& u,
                                               double omega, double& shift) {
    for (int attempt = 0; attempt < 60; ++attempt) {
        Tridiagonal<double> p = h;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double r2 = std::max(std::norm(u[j]), 1e-300);
            const double w = std::clamp(omega - std::log(r2), 0.0, 1e4);
            p.diag[j] += shift + w;
        }
        TridiagonalFactor<double> f(p);
        const auto& pivots = f.pivots();
        if (std::all_of(pivots.begin(), pivots.end(), [](double v) { return v > 0.0; })) return f;
        shift *= 2.0;
    }
    throw std::runtime_error("could not build a positive definite preconditioner");
}

}  // namespace

MinimizeResult minimize_dgamma(double gamma, double omega, const Seed& seed,
                               const MinimizeOptions& opts) {
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw std::invalid_argument("minimize_dgamma: gamma must be positive");
    }
    const Grid grid(opts.half_width, opts.nodes);
    Field u = seed.kind == SeedKind::Custom
                  ? (seed.custom ? *seed.custom
                                 : throw std::invalid_argument("custom seed without a field"))
                  : seed_field(grid, seed.kind);
    if (!(u.grid() == grid)) throw std::invalid_argument("custom seed grid differs from options");
    if (opts.enforce_odd) u = odd_part(u);
    u = nehari_project(u, gamma, omega);

    const auto h = delta_prime_hamiltonian(grid, gamma);
    double shift = 1.5 * 4.0 / (gamma * gamma) + 2.0;

    auto value_of = [](const Field& f) { return 0.5 * mass(f); };

    double value = value_of(u);
    Field grad = action_gradient(u, gamma, omega);
    double step = 1.0;
    std::optional<Field> prev_u;
    std::optional<Field> prev_grad;

    MinimizeResult out{u, value, 0, {}};
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        const auto precond = build_preconditioner(h, u, omega, shift);
        Field dir(grid);
        for (std::size_t j = 0; j < u.size(); ++j) dir[j] = -grad[j];
        precond.solve<Complex>(dir.values());
        if (opts.enforce_odd) dir = odd_part(dir);

        if (prev_u && prev_grad) {
            // Barzilai-Borwein length in the preconditioned metric, s = u_k - u_{k-1}.
            Field s = u - *prev_u;
            Field y = grad - *prev_grad;
            Field py = y;
            precond.solve<Complex>(py.values());
            const double sy = real_dot(s, y);
            const double ypy = real_dot(y, py);
            if (sy > 0.0 && ypy > 0.0) step = std::clamp(sy / ypy, 1e-3, 50.0);
        }

        Field trial(grid);
        double trial_value = value;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            trial = u;
            for (std::size_t j = 0; j < u.size(); ++j) trial[j] += step * dir[j];
            if (opts.enforce_odd) trial = odd_part(trial);
            trial = nehari_project(trial, gamma, omega);
            trial_value = value_of(trial);
            if (trial_value <= value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }

        const double change = std::abs(trial_value - value) / std::max(trial_value, 1e-300);
        if (!accepted) {
            // No decrease at any tested scale: already at the discrete minimum
            // up to roundoff in S.
            trial = u;
            trial_value = value;
        }
        prev_u = u;
        prev_grad = grad;
        u = std::move(trial);
        value = trial_value;
        grad = action_gradient(u, gamma, omega);

        // Convergence is judged on the preconditioned gradient: the raw one
        // carries the 1/dx^2 scale of H and stalls well above zero once S is
        // flat to roundoff.
        Field pgrad = grad;
        precond.solve<Complex>(pgrad.values());
        const double scale = std::max(max_abs(u), 1e-300);

        out = MinimizeResult{u, value, it, {}};
        if ((change < opts.value_tol || !accepted) && max_abs(pgrad) < opts.residual_tol * scale) {
            out.residual = stationary_residual(u, gamma, omega);
            return out;
        }
        if (!accepted && step < 1e-12) break;
    }
    out.residual = stationary_residual(out.field, gamma, omega);
    std::ostringstream msg;
    msg << "minimize_dgamma did not converge after " << out.iterations
        << " iterations (value " << out.value << ", interior residual " << out.residual.interior
        << ")";
    throw ConvergenceError(msg.str(), out);
}

}  // namespace logdelta
