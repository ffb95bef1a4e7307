#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logdelta/dynamics.hpp"
#include "logdelta/fields.hpp"
#include "logdelta/stationary.hpp"

namespace py = pybind11;
using namespace logdelta;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

Field to_field(const CArray& values, double half_width) {
    if (values.ndim() != 1) throw std::invalid_argument("field values must be one-dimensional");
    const auto n = static_cast<std::size_t>(values.shape(0));
    std::vector<Complex> v(values.data(), values.data() + n);
    return Field(Grid(half_width, n), std::move(v));
}

CArray to_array(const Field& u) {
    return CArray(static_cast<py::ssize_t>(u.size()), u.values().data());
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict residual_dict(const StationaryResidual& r) {
    py::dict d;
    d["interior"] = r.interior;
    d["bc1"] = r.bc1;
    d["bc2"] = r.bc2;
    return d;
}

Seed make_seed(const py::object& seed, double half_width, std::size_t nodes) {
    if (py::isinstance<py::str>(seed)) {
        const auto s = seed.cast<std::string>();
        if (s == "symmetric") return Seed::symmetric();
        if (s == "left") return Seed::left();
        if (s == "right") return Seed::right();
        throw std::invalid_argument("seed must be 'symmetric', 'left', 'right' or an array");
    }
    Field f = to_field(seed.cast<CArray>(), half_width);
    if (f.size() != nodes) throw std::invalid_argument("seed array length must equal nodes");
    return Seed::from_field(std::move(f));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stationary states, Nehari minimization and split-step dynamics for the delta-prime log-NLS";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<GroundStateParams>(m, "GroundState")
        .def_readonly("gamma", &GroundStateParams::gamma)
        .def_readonly("omega", &GroundStateParams::omega)
        .def_readonly("t1", &GroundStateParams::t1)
        .def_readonly("t2", &GroundStateParams::t2)
        .def_property_readonly("branch", [](const GroundStateParams& p) { return to_string(p.branch); })
        .def_property_readonly("action", &action_closed_form)
        .def("residuals", &GroundStateParams::residuals)
        .def("__repr__", [](const GroundStateParams& p) {
            return "GroundState(gamma=" + std::to_string(p.gamma) + ", branch=" + to_string(p.branch) +
                   ", t1=" + std::to_string(p.t1) + ", t2=" + std::to_string(p.t2) + ")";
        });

    py::class_<BifurcationPoint>(m, "BifurcationPoint")
        .def_readonly("gamma", &BifurcationPoint::gamma)
        .def_readonly("branches", &BifurcationPoint::branches)
        .def_readonly("actions", &BifurcationPoint::actions);

    m.def("solve_3s", &solve_3s, py::arg("gamma"), "All (t1, t2) pairs solving the profile system.");
    m.def("stationary_states", &stationary_states, py::arg("gamma"), py::arg("omega") = 0.0);
    m.def("bifurcation_sweep", &bifurcation_sweep, py::arg("gamma_min"), py::arg("gamma_max"), py::arg("steps"),
          py::arg("omega") = 0.0, py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("sigma_map", &sigma_map, py::arg("t"), py::arg("gamma"));
    m.def("n_gamma", &n_gamma, py::arg("t"), py::arg("gamma"));
    m.def("d_gamma", &d_gamma, py::arg("gamma"), py::arg("omega") = 0.0);
    m.def("dgamma_lower_bound", &dgamma_lower_bound, py::arg("gamma"), py::arg("omega") = 0.0);
    m.def("d_zero", &d_zero, py::arg("omega") = 0.0);
    m.def("d_free", &d_free, py::arg("omega") = 0.0);

    m.def("grid_coordinates", [](double half_width, std::size_t nodes) {
        return to_array(Grid(half_width, nodes).coordinates());
    }, py::arg("half_width"), py::arg("nodes"));

    m.def("sample_profile", [](const GroundStateParams& p, double half_width, std::size_t nodes) {
        return to_array(sample_profile(p, Grid(half_width, nodes)));
    }, py::arg("state"), py::arg("half_width") = 20.0, py::arg("nodes") = 4096);

    m.def("report", [](const CArray& u, double half_width, double gamma, double omega) {
        const auto r = report(to_field(u, half_width), gamma, omega);
        py::dict d;
        d["form"] = r.form;
        d["mass"] = r.mass;
        d["entropy"] = r.entropy;
        d["energy"] = r.energy;
        d["action"] = r.action;
        d["nehari"] = r.nehari;
        return d;
    }, py::arg("u"), py::arg("half_width"), py::arg("gamma"), py::arg("omega") = 0.0);

    m.def("stationary_residual", [](const CArray& u, double half_width, double gamma, double omega) {
        return residual_dict(stationary_residual(to_field(u, half_width), gamma, omega));
    }, py::arg("u"), py::arg("half_width"), py::arg("gamma"), py::arg("omega") = 0.0);

    m.def("minimize", [](double gamma, double omega, const py::object& seed, double half_width, std::size_t nodes,
                         std::size_t max_iter, double value_tol, double residual_tol, bool enforce_odd) {
        MinimizeOptions o;
        o.half_width = half_width;
        o.nodes = nodes;
        o.max_iter = max_iter;
        o.value_tol = value_tol;
        o.residual_tol = residual_tol;
        o.enforce_odd = enforce_odd;
        const Seed s = make_seed(seed, half_width, nodes);
        std::optional<MinimizeResult> r;
        {
            py::gil_scoped_release release;
            r.emplace(minimize_dgamma(gamma, omega, s, o));
        }
        py::dict d;
        d["field"] = to_array(r->field);
        d["value"] = r->value;
        d["iterations"] = r->iterations;
        d["residual"] = residual_dict(r->residual);
        return d;
    }, py::arg("gamma"), py::arg("omega") = 0.0, py::arg("seed") = "symmetric", py::arg("half_width") = 20.0,
       py::arg("nodes") = 4096, py::arg("max_iter") = 20000, py::arg("value_tol") = 1e-10,
       py::arg("residual_tol") = 1e-8, py::arg("enforce_odd") = false);

    m.def("evolve", [](const CArray& u0, double half_width, double gamma, double omega, double dt, double t_end,
                       std::size_t record_every, std::optional<double> m_level,
                       std::optional<GroundStateParams> reference) {
        const Field f = to_field(u0, half_width);
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.record_every = record_every;
        if (m_level) cfg.m = RegularizationLevel(*m_level);
        std::optional<Trajectory> t;
        {
            py::gil_scoped_release release;
            t.emplace(evolve(f, gamma, omega, cfg, reference));
        }
        std::vector<double> time, mass_, energy_, ds, dw;
        for (const auto& r : t->records) {
            time.push_back(r.time);
            mass_.push_back(r.mass);
            energy_.push_back(r.energy);
            ds.push_back(r.orbital_distance_sigma);
            dw.push_back(r.orbital_distance_w);
        }
        py::dict d;
        d["t"] = to_array(time);
        d["mass"] = to_array(mass_);
        d["energy"] = to_array(energy_);
        d["dist_sigma"] = to_array(ds);
        d["dist_w"] = to_array(dw);
        d["final"] = to_array(t->final_state);
        return d;
    }, py::arg("u0"), py::arg("half_width"), py::arg("gamma"), py::arg("omega") = 0.0, py::arg("dt") = 1e-3,
       py::arg("t_end") = 1.0, py::arg("record_every") = 100, py::arg("m") = py::none(),
       py::arg("reference") = py::none());

    m.def("stability", [](double gamma, double omega, const std::string& branch, double delta, double t_end,
                          std::size_t trials, std::uint64_t rng_seed, double half_width, std::size_t nodes, double dt,
                          std::size_t record_every, unsigned threads) {
        StabilityOptions o;
        o.gamma = gamma;
        o.omega = omega;
        o.branch = branch_from_string(branch);
        o.perturbation_size = delta;
        o.t_end = t_end;
        o.trials = trials;
        o.rng_seed = rng_seed;
        o.half_width = half_width;
        o.nodes = nodes;
        o.dt = dt;
        o.record_every = record_every;
        o.threads = threads;
        std::optional<StabilitySummary> s;
        {
            py::gil_scoped_release release;
            s.emplace(stability_experiment(o));
        }
        py::list rows;
        for (const auto& t : s->trials) {
            py::dict r;
            r["seed"] = t.seed;
            r["initial_distance"] = t.initial_distance;
            r["max_distance"] = t.max_distance;
            r["ratio"] = t.ratio;
            r["mass_drift"] = t.mass_drift;
            rows.append(r);
        }
        py::dict d;
        d["trials"] = rows;
        d["max_ratio"] = s->max_ratio;
        d["max_ratio_w"] = s->max_ratio_w;
        d["exploratory"] = s->exploratory;
        return d;
    }, py::arg("gamma"), py::arg("omega") = 0.0, py::arg("branch") = "symmetric", py::arg("delta") = 1e-2,
       py::arg("t_end") = 50.0, py::arg("trials") = 8, py::arg("rng_seed") = 12345, py::arg("half_width") = 20.0,
       py::arg("nodes") = 4096, py::arg("dt") = 1e-3, py::arg("record_every") = 100, py::arg("threads") = 1);
}
