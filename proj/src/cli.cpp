#include "logdelta/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "logdelta/dynamics.hpp"
#include "logdelta/fields.hpp"
#include "logdelta/io.hpp"
#include "logdelta/stationary.hpp"

namespace logdelta::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// A usage problem found after parsing (e.g. an out-of-range combination).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GridOpts {
    double half_width = 20.0;
    std::size_t nodes = 4096;

    void add(CLI::App* app) {
        app->add_option("-L,--half-width", half_width, "domain is [-L, L]")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("-n,--nodes", nodes, "grid nodes (even)")->capture_default_str();
    }
    Grid grid() const {
        if (nodes < 6 || nodes % 2 != 0) throw UsageError("--nodes must be even and >= 6");
        return Grid(half_width, nodes);
    }
};

void require_positive_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw UsageError("--gamma must be positive (attractive interaction)");
    }
}

std::optional<RegularizationLevel> regularization(const std::optional<double>& m) {
    if (!m) return std::nullopt;
    if (!(*m >= 1.0) || !std::isfinite(*m)) throw UsageError("--m must be a finite number >= 1");
    return RegularizationLevel(*m);
}

// Writes via atomic_write, or to `out` when no path is given.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(out);
    } else {
        atomic_write(path, body);
    }
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------

struct GroundCmd {
    double gamma = 0.0;
    double omega = 0.0;
    GridOpts grid;
    std::string out_path;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("ground", "stationary states at one gamma");
        c->add_option("--gamma", gamma, "interaction strength")->required();
        c->add_option("--omega", omega, "frequency")->capture_default_str();
        grid.add(c);
        c->add_option("-o,--out", out_path, "JSON output (default stdout)");
        cmd = c;
    }

    int run(std::ostream& out, std::ostream& err) const {
        require_positive_gamma(gamma);
        if (!std::isfinite(omega)) throw UsageError("--omega must be finite");
        const Grid g = grid.grid();

        Json doc;
        doc["gamma"] = gamma;
        doc["omega"] = omega;
        doc["half_width"] = g.half_width();
        doc["nodes"] = g.size();
        Json branches = Json::array();
        const auto states = stationary_states(gamma, omega);
        double best = 0.0;
        std::string best_name;
        for (const auto& s : states) {
            const Field phi = sample_profile(s, g);
            const double action = action_closed_form(s);
            const auto [balance, coupling] = s.residuals();
            Json b = params_json(s);
            b["action"] = action;
            b["system_residuals"] = Json{{"balance", balance}, {"coupling", coupling}};
            b["report"] = report_json(report(phi, gamma, omega));
            b["stationary_residual"] = residual_json(stationary_residual(phi, gamma, omega));
            branches.push_back(std::move(b));
            if (best_name.empty() || action < best) {
                best = action;
                best_name = to_string(s.branch);
            }
        }
        doc["branches"] = std::move(branches);
        doc["ground_state"] = best_name;
        doc["d_gamma"] = best;
        doc["lower_bound"] = dgamma_lower_bound(gamma, omega);
        doc["d_zero"] = d_zero(omega);
        doc["d_free"] = d_free(omega);
        emit(out_path, out, [&](std::ostream& os) { os << dump_json(doc); });
        if (!out_path.empty()) {
            for (const auto& b : doc["branches"]) {
                out << b["branch"].get<std::string>() << " t1=" << fmt(b["t1"]) << " t2=" << fmt(b["t2"])
                    << " action=" << fmt(b["action"]) << '\n';
            }
        }
        (void)err;
        return kSuccess;
    }

    CLI::App* cmd = nullptr;
};

struct BifurcateCmd {
    double gamma_min = 1.5;
    double gamma_max = 2.5;
    std::size_t points = 101;
    double omega = 0.0;
    unsigned threads = 1;
    std::string out_path;
    std::string json_path;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("bifurcate", "branch data over a gamma range");
        c->add_option("--gamma-min", gamma_min)->capture_default_str();
        c->add_option("--gamma-max", gamma_max)->capture_default_str();
        c->add_option("--points", points, "number of gamma values")->capture_default_str();
        c->add_option("--omega", omega)->capture_default_str();
        c->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("-o,--out", out_path, "CSV output (default stdout)");
        c->add_option("--json", json_path, "also write the sweep as JSON");
        cmd = c;
    }

    int run(std::ostream& out, std::ostream& err) const {
        require_positive_gamma(gamma_min);
        require_positive_gamma(gamma_max);
        if (!std::isfinite(omega)) throw UsageError("--omega must be finite");
        if (gamma_max < gamma_min) throw UsageError("--gamma-max must be >= --gamma-min");
        if (points == 0) throw UsageError("--points must be positive");
        if (gamma_max == gamma_min && points != 1) throw UsageError("a single-point range needs --points 1");
        if (gamma_max > gamma_min && points < 2) throw UsageError("a proper range needs --points >= 2");

        std::vector<BifurcationPoint> sweep;
        if (points == 1) {
            sweep.push_back(bifurcation_point(gamma_min, omega));
        } else {
            sweep = bifurcation_sweep(gamma_min, gamma_max, points, omega, threads);
        }
        emit(out_path, out, [&](std::ostream& os) { write_sweep_csv(os, sweep); });
        if (!json_path.empty()) {
            atomic_write(json_path, [&](std::ostream& os) { os << dump_json(sweep_json(sweep)); });
        }

        // Summary goes to stderr when the CSV itself is on stdout.
        std::ostream& log = out_path.empty() || out_path == "-" ? err : out;
        std::optional<std::size_t> first_three;
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            if (sweep[i].branches.size() == 3) {
                first_three = i;
                break;
            }
        }
        if (!first_three) {
            log << "transition: none in range (one branch throughout)\n";
        } else if (*first_three == 0) {
            log << "transition: none in range (three branches throughout)\n";
        } else {
            log << "transition: branch count 1 -> 3 in (" << fmt(sweep[*first_three - 1].gamma) << ", "
                << fmt(sweep[*first_three].gamma) << "], gamma=" << fmt(sweep[*first_three].gamma) << '\n';
        }
        return kSuccess;
    }

    CLI::App* cmd = nullptr;
};

struct MinimizeCmd {
    double gamma = 0.0;
    double omega = 0.0;
    std::string seed = "symmetric";
    std::string seed_file;
    GridOpts grid;
    std::size_t max_iter = 20000;
    double value_tol = 1e-10;
    double residual_tol = 1e-8;
    bool odd = false;
    std::string out_path;
    std::string json_path;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("minimize", "numerical ground state on the Nehari manifold");
        c->add_option("--gamma", gamma)->required();
        c->add_option("--omega", omega)->capture_default_str();
        c->add_option("--seed", seed, "symmetric | left | right | file")
            ->capture_default_str()
            ->check(CLI::IsMember({"symmetric", "left", "right", "file"}));
        c->add_option("--seed-file", seed_file, "x,re,im CSV used with --seed file");
        grid.add(c);
        c->add_option("--max-iter", max_iter)->capture_default_str();
        c->add_option("--value-tol", value_tol)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("--residual-tol", residual_tol)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_flag("--odd", odd, "restrict to odd fields");
        c->add_option("-o,--out", out_path, "minimizer field CSV");
        c->add_option("--json", json_path, "summary JSON");
        cmd = c;
    }

    int run(std::ostream& out, std::ostream& err) const {
        require_positive_gamma(gamma);
        if (!std::isfinite(omega)) throw UsageError("--omega must be finite");
        if (max_iter == 0) throw UsageError("--max-iter must be positive");
        const Grid g = grid.grid();
        Seed s = Seed::symmetric();
        if (seed == "left") s = Seed::left();
        if (seed == "right") s = Seed::right();
        if (seed == "file") {
            if (seed_file.empty()) throw UsageError("--seed file needs --seed-file");
            Field f = read_field_csv(seed_file);
            if (!(f.grid() == g)) throw UsageError("--seed-file grid differs from -L/-n");
            s = Seed::from_field(std::move(f));
        } else if (!seed_file.empty()) {
            throw UsageError("--seed-file is only used with --seed file");
        }
        MinimizeOptions opts;
        opts.half_width = g.half_width();
        opts.nodes = g.size();
        opts.max_iter = max_iter;
        opts.value_tol = value_tol;
        opts.residual_tol = residual_tol;
        opts.enforce_odd = odd;

        std::optional<MinimizeResult> result;
        try {
            result.emplace(minimize_dgamma(gamma, omega, s, opts));
        } catch (const ConvergenceError& e) {
            err << "minimize: " << e.what() << " after " << e.last().iterations
                << " iterations, value=" << fmt(e.last().value)
                << " residual interior=" << fmt(e.last().residual.interior) << '\n';
            return kNumerical;
        }
        const MinimizeResult& res = *result;
        const double closed = d_gamma(gamma, omega);
        const double bound = dgamma_lower_bound(gamma, omega);
        const double rel = std::abs(res.value - closed) / closed;
        out << "value " << fmt(res.value) << '\n'
            << "closed_form " << fmt(closed) << '\n'
            << "relative_error " << fmt(rel) << '\n'
            << "lower_bound " << fmt(bound) << (res.value >= bound ? " (holds)" : " (VIOLATED)") << '\n'
            << "d_zero " << fmt(d_zero(omega)) << (res.value < d_zero(omega) ? " (below)" : " (not below)")
            << '\n'
            << "iterations " << res.iterations << '\n'
            << "residual interior=" << fmt(res.residual.interior) << " bc1=" << fmt(res.residual.bc1)
            << " bc2=" << fmt(res.residual.bc2) << '\n';
        if (!out_path.empty()) {
            atomic_write(out_path, [&](std::ostream& os) { write_field_csv(os, res.field); });
        }
        if (!json_path.empty()) {
            Json j;
            j["gamma"] = gamma;
            j["omega"] = omega;
            j["seed"] = seed;
            j["value"] = res.value;
            j["closed_form"] = closed;
            j["relative_error"] = rel;
            j["lower_bound"] = bound;
            j["d_zero"] = d_zero(omega);
            j["iterations"] = res.iterations;
            j["residual"] = residual_json(res.residual);
            j["report"] = report_json(report(res.field, gamma, omega));
            atomic_write(json_path, [&](std::ostream& os) { os << dump_json(j); });
        }
        return kSuccess;
    }

    CLI::App* cmd = nullptr;
};

struct DynamicsOpts {
    double gamma = 0.0;
    double omega = 0.0;
    std::string branch = "symmetric";
    GridOpts grid;
    double dt = 1e-3;
    double t_end = 10.0;
    std::size_t record_every = 100;
    std::optional<double> m;

    void add(CLI::App* c) {
        c->add_option("--gamma", gamma)->required();
        c->add_option("--omega", omega)->capture_default_str();
        c->add_option("--branch", branch, "symmetric | asymmetric_left | asymmetric_right")
            ->capture_default_str();
        grid.add(c);
        c->add_option("--dt", dt)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("--t-end", t_end)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("--record-every", record_every, "steps between records")->capture_default_str();
        c->add_option("--m", m, "regularization level (default: raw logarithm)");
    }

    GroundStateParams state() const {
        require_positive_gamma(gamma);
        if (!std::isfinite(omega)) throw UsageError("--omega must be finite");
        Branch b;
        try {
            b = branch_from_string(branch);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        for (const auto& s : stationary_states(gamma, omega)) {
            if (s.branch == b) return s;
        }
        throw UsageError("branch " + branch + " does not exist at this gamma (asymmetric needs gamma > 2)");
    }

    EvolutionConfig config() const {
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.record_every = record_every;
        cfg.m = regularization(m);
        try {
            cfg.steps();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

struct EvolveCmd {
    DynamicsOpts dyn;
    std::string input;
    double perturb = 0.0;
    std::uint64_t rng_seed = 12345;
    std::string out_path;
    std::size_t snapshot_every = 0;
    std::string snapshot_prefix = "snapshot";

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("evolve", "time evolution from a stationary state or a field file");
        dyn.add(c);
        c->add_option("--input", input, "initial field CSV (default: the chosen stationary state)");
        c->add_option("--perturb", perturb, "add a random perturbation of this relative Sigma size")
            ->capture_default_str()
            ->check(CLI::NonNegativeNumber);
        c->add_option("--rng-seed", rng_seed)->capture_default_str();
        c->add_option("-o,--out", out_path, "trajectory CSV (default stdout)");
        c->add_option("--snapshot-every", snapshot_every, "write the field every k records (0: never)")
            ->capture_default_str();
        c->add_option("--snapshot-prefix", snapshot_prefix, "snapshot files are PREFIX_RECORD.csv")
            ->capture_default_str();
        cmd = c;
    }

    int run(std::ostream& out, std::ostream& err) const {
        const GroundStateParams ref = dyn.state();
        const EvolutionConfig cfg = dyn.config();
        const Grid g = dyn.grid.grid();
        Field u0 = input.empty() ? sample_profile(ref, g) : read_field_csv(input);
        if (!input.empty() && !(u0.grid() == g)) {
            throw UsageError("--input grid differs from -L/-n");
        }
        if (perturb > 0.0) {
            u0 += random_perturbation(g, trial_seed(rng_seed, 0), perturb * sigma_norm(sample_profile(ref, g)));
        }
        SnapshotCallback snap;
        if (snapshot_every > 0) {
            snap = [&](std::size_t idx, double, const Field& u) {
                if (idx % snapshot_every != 0) return;
                std::ostringstream name;
                name << snapshot_prefix << '_' << std::setw(6) << std::setfill('0') << idx << ".csv";
                atomic_write(name.str(), [&](std::ostream& os) { write_field_csv(os, u); });
            };
        }
        std::optional<Trajectory> result;
        try {
            result.emplace(evolve(u0, dyn.gamma, dyn.omega, cfg, ref, snap));
        } catch (const NonFiniteStateError& e) {
            err << "evolve: " << e.what();
            if (e.last_record()) err << "; last finite record at t=" << fmt(e.last_record()->time);
            err << '\n';
            return kNumerical;
        }
        const Trajectory& traj = *result;
        emit(out_path, out, [&](std::ostream& os) { write_trajectory_csv(os, traj.records); });

        std::ostream& log = out_path.empty() || out_path == "-" ? err : out;
        const auto& r0 = traj.records.front();
        double mass_drift = 0.0, energy_drift = 0.0, max_dist = 0.0;
        const double escale = energy_scale(u0, dyn.gamma);
        for (const auto& r : traj.records) {
            mass_drift = std::max(mass_drift, std::abs(r.mass - r0.mass) / r0.mass);
            energy_drift = std::max(energy_drift, std::abs(r.energy - r0.energy) / escale);
            max_dist = std::max(max_dist, r.orbital_distance_sigma);
        }
        log << "steps " << cfg.steps() << " records " << traj.records.size() << '\n'
            << "mass_drift " << fmt(mass_drift) << '\n'
            << "energy_drift " << fmt(energy_drift) << '\n'
            << "max_dist_sigma " << fmt(max_dist) << '\n';
        return kSuccess;
    }

    CLI::App* cmd = nullptr;
};

struct StabilityCmd {
    DynamicsOpts dyn;
    double delta = 1e-2;
    std::size_t trials = 8;
    std::uint64_t rng_seed = 12345;
    unsigned threads = 1;
    std::string out_path;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("stability", "perturbed evolutions around a stationary state");
        dyn.add(c);
        dyn.t_end = 50.0;
        c->get_option("--t-end")->default_val(50.0);
        c->add_option("--delta", delta, "perturbation size relative to the state's Sigma norm")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        c->add_option("--trials", trials)->capture_default_str();
        c->add_option("--rng-seed", rng_seed)->capture_default_str();
        c->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
        c->add_option("-o,--out", out_path, "summary JSON (default stdout)");
        cmd = c;
    }

    int run(std::ostream& out, std::ostream& err) const {
        const GroundStateParams ref = dyn.state();
        const EvolutionConfig cfg = dyn.config();
        const Grid g = dyn.grid.grid();
        if (trials == 0) throw UsageError("--trials must be positive");
        StabilityOptions o;
        o.gamma = dyn.gamma;
        o.omega = dyn.omega;
        o.branch = ref.branch;
        o.perturbation_size = delta;
        o.t_end = cfg.t_end;
        o.dt = cfg.dt;
        o.record_every = cfg.record_every;
        o.m = cfg.m;
        o.trials = trials;
        o.rng_seed = rng_seed;
        o.half_width = g.half_width();
        o.nodes = g.size();
        o.threads = threads;
        StabilitySummary s;
        try {
            s = stability_experiment(o);
        } catch (const NonFiniteStateError& e) {
            err << "stability: " << e.what() << '\n';
            return kNumerical;
        }
        emit(out_path, out, [&](std::ostream& os) { os << dump_json(stability_json(s)); });
        std::ostream& log = out_path.empty() || out_path == "-" ? err : out;
        log << "max_ratio " << fmt(s.max_ratio) << (s.exploratory ? " (exploratory)" : "") << '\n';
        return kSuccess;
    }

    CLI::App* cmd = nullptr;
};

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file name");
            file = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!file) return rest;
    std::ifstream in(*file);
    if (!in) throw std::invalid_argument("cannot read config file " + *file);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto entries = parse_config_text(buf.str());

    // Settings go right after the subcommand name.
    auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
    std::vector<std::string> injected;
    for (const auto& [key, value] : entries) {
        if (!given_on_command_line(rest, key)) injected.push_back("--" + key + "=" + value);
    }
    const auto pos = sub == rest.end() ? rest.end() : sub + 1;
    rest.insert(pos, injected.begin(), injected.end());
    return rest;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"logdelta: logarithmic Schroedinger equation with a delta-prime interaction"};
    app.name("logdelta");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::string config_path;  // consumed by expand_config, listed here for --help
    app.add_option("--config", config_path, "key = value settings file; command line flags take precedence");

    GroundCmd ground;
    BifurcateCmd bifurcate;
    MinimizeCmd minimize;
    EvolveCmd evolve_cmd;
    StabilityCmd stability;
    ground.add(app);
    bifurcate.add(app);
    minimize.add(app);
    evolve_cmd.add(app);
    stability.add(app);

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (ground.cmd->parsed()) return ground.run(out, err);
        if (bifurcate.cmd->parsed()) return bifurcate.run(out, err);
        if (minimize.cmd->parsed()) return minimize.run(out, err);
        if (evolve_cmd.cmd->parsed()) return evolve_cmd.run(out, err);
        if (stability.cmd->parsed()) return stability.run(out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace logdelta::cli
