#include "logdelta/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace logdelta {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_value(std::ostringstream& os, const Json& v, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                os << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
                dump_value(os, it.value(), indent, depth + 1);
            }
            newline(depth);
            os << '}';
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            os << '[';
            bool first = true;
            for (const auto& e : v) {
                if (!first) os << ',';
                first = false;
                newline(depth + 1);
                dump_value(os, e, indent, depth + 1);
            }
            newline(depth);
            os << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            // JSON has no inf/nan
            if (std::isfinite(d)) {
                os << format_double(d);
            } else {
                os << "null";
            }
            return;
        }
        default:
            os << v.dump();
    }
}

}  // namespace

std::string dump_json(const Json& doc, int indent) {
    std::ostringstream os;
    dump_value(os, doc, indent, 0);
    os << '\n';
    return os.str();
}

void write_sweep_csv(std::ostream& os, const std::vector<BifurcationPoint>& sweep) {
    os << "gamma,branch,t1,t2,action\n";
    for (const auto& pt : sweep) {
        for (std::size_t i = 0; i < pt.branches.size(); ++i) {
            const auto& b = pt.branches[i];
            os << format_double(pt.gamma) << ',' << to_string(b.branch) << ',' << format_double(b.t1)
               << ',' << format_double(b.t2) << ',' << format_double(pt.actions[i]) << '\n';
        }
    }
}

Json params_json(const GroundStateParams& p) {
    Json j;
    j["gamma"] = p.gamma;
    j["omega"] = p.omega;
    j["branch"] = to_string(p.branch);
    j["t1"] = p.t1;
    j["t2"] = p.t2;
    return j;
}

Json sweep_json(const std::vector<BifurcationPoint>& sweep) {
    Json rows = Json::array();
    for (const auto& pt : sweep) {
        for (std::size_t i = 0; i < pt.branches.size(); ++i) {
            const auto& b = pt.branches[i];
            Json r;
            r["gamma"] = pt.gamma;
            r["branch"] = to_string(b.branch);
            r["t1"] = b.t1;
            r["t2"] = b.t2;
            r["action"] = pt.actions[i];
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

void write_field_csv(std::ostream& os, const Field& u) {
    os << "x,re,im\n";
    const Grid& g = u.grid();
    for (std::size_t j = 0; j < u.size(); ++j) {
        os << format_double(g.x(j)) << ',' << format_double(u[j].real()) << ','
           << format_double(u[j].imag()) << '\n';
    }
}

Json field_json(const Field& u) {
    Json j;
    j["half_width"] = u.grid().half_width();
    j["nodes"] = u.size();
    Json x = Json::array(), re = Json::array(), im = Json::array();
    for (std::size_t k = 0; k < u.size(); ++k) {
        x.push_back(u.grid().x(k));
        re.push_back(u[k].real());
        im.push_back(u[k].imag());
    }
    j["x"] = std::move(x);
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

Field read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0) {
        throw IoError(path.string() + ": expected header x,re,im");
    }
    std::vector<double> xs;
    std::vector<Complex> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
            throw IoError(path.string() + ": malformed row '" + line + "'");
        }
        try {
            xs.push_back(std::stod(a));
            vals.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::exception&) {
            throw IoError(path.string() + ": non-numeric row '" + line + "'");
        }
    }
    if (xs.size() < 6) throw IoError(path.string() + ": too few rows");
    const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    const double half_width = -xs.front() + 0.5 * dx;
    Grid grid(half_width, xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (std::abs(grid.x(j) - xs[j]) > 1e-9 * std::max(1.0, half_width)) {
            throw IoError(path.string() + ": coordinates are not a symmetric staggered grid");
        }
    }
    return Field(grid, std::move(vals));
}

Json report_json(const FunctionalReport& r) {
    Json j;
    j["form"] = r.form;
    j["mass"] = r.mass;
    j["entropy"] = r.entropy;
    j["energy"] = r.energy;
    j["action"] = r.action;
    j["nehari"] = r.nehari;
    return j;
}

Json residual_json(const StationaryResidual& r) {
    Json j;
    j["interior"] = r.interior;
    j["bc1"] = r.bc1;
    j["bc2"] = r.bc2;
    return j;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records) {
    os << "t,mass,energy,dist_sigma,dist_w\n";
    for (const auto& r : records) {
        os << format_double(r.time) << ',' << format_double(r.mass) << ',' << format_double(r.energy)
           << ',' << format_double(r.orbital_distance_sigma) << ','
           << format_double(r.orbital_distance_w) << '\n';
    }
}

Json stability_json(const StabilitySummary& s) {
    const auto& o = s.options;
    Json j;
    j["gamma"] = o.gamma;
    j["omega"] = o.omega;
    j["branch"] = to_string(o.branch);
    j["status"] = s.exploratory ? "exploratory" : "gated";
    j["exploratory"] = s.exploratory;
    j["t1"] = s.state.t1;
    j["t2"] = s.state.t2;
    j["perturbation_size"] = o.perturbation_size;
    j["t_end"] = o.t_end;
    j["dt"] = o.dt;
    j["half_width"] = o.half_width;
    j["nodes"] = o.nodes;
    j["record_every"] = o.record_every;
    if (o.m) {
        j["m"] = o.m->value();
    } else {
        j["m"] = nullptr;
    }
    j["rng_seed"] = o.rng_seed;
    j["metric"] = "sigma";
    Json trials = Json::array();
    for (const auto& t : s.trials) {
        Json r;
        r["seed"] = t.seed;
        r["initial_distance"] = t.initial_distance;
        r["max_distance"] = t.max_distance;
        r["ratio"] = t.ratio;
        r["initial_distance_w"] = t.initial_distance_w;
        r["max_distance_w"] = t.max_distance_w;
        r["mass_drift"] = t.mass_drift;
        trials.push_back(std::move(r));
    }
    j["trials"] = std::move(trials);
    j["max_ratio"] = s.max_ratio;
    j["max_ratio_w"] = s.max_ratio_w;
    return j;
}

void atomic_write(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) throw IoError("output directory does not exist: " + dir.string());
    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    try {
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os) throw IoError("cannot write " + path.string());
            body(os);
            os.flush();
            if (!os) throw IoError("write failed for " + path.string());
        }
        std::error_code ec;
        fs::rename(tmp, path, ec);
        if (ec) throw IoError("cannot write " + path.string() + ": " + ec.message());
    } catch (...) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw;
    }
}

}  // namespace logdelta
