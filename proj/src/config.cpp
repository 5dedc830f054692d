#include "spinsq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "spinsq/errors.hpp"

namespace spinsq {

using nlohmann::json;

std::vector<double> TimeGrid::points() const {
    if (!explicit_us.empty()) {
        if (!std::is_sorted(explicit_us.begin(), explicit_us.end())) throw ConfigError("time grid: times must be sorted");
        if (explicit_us.front() < 0.0) throw ConfigError("time grid: times must be >= 0");
        return explicit_us;
    }
    if (!(step_us > 0.0)) throw ConfigError("time grid: step must be positive");
    if (!(start_us >= 0.0) || !(stop_us >= start_us)) throw ConfigError("time grid: need 0 <= start <= stop");
    const auto n = static_cast<long>(std::floor((stop_us - start_us) / step_us + 1e-9));
    if (n > 1000000) throw ConfigError("time grid: too many points");
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(start_us + static_cast<double>(i) * step_us);
    return out;
}

void RunConfig::validate() const {
    if (version != kConfigVersion) {
        throw ConfigError("config: unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(kConfigVersion) + ")");
    }
    lattice.validate();
    if (lattice.n_atoms() < 1) throw ConfigError("config: the lattice has no atoms");
    if (!(J_MHz > 0.0) || !std::isfinite(J_MHz)) throw ConfigError("config: J_MHz must be positive");
    errors.validate();
    if (shots < 0 || shots == 1) throw ConfigError("config: shots must be 0 or >= 2");
    if (realizations < 1) throw ConfigError("config: realizations must be >= 1");
    if (bootstrap < 0) throw ConfigError("config: bootstrap must be >= 0");
    if (time.points().empty()) throw ConfigError("config: empty time grid");
    krylov.validate();
    if (lattice.n_atoms() > krylov.max_sites) {
        throw ConfigError("config: " + std::to_string(lattice.n_atoms()) + " atoms exceed krylov.max_sites = " +
                          std::to_string(krylov.max_sites));
    }
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (half_window < 1) throw ConfigError("config: half_window must be >= 1");
    if (!(protocol.t_F_us > 0.0)) throw ConfigError("config: protocol.t_F_us must be positive");
    if (protocol.t1_ref_us < 0.0) throw ConfigError("config: protocol.t1_ref_us must be >= 0");
    if (protocol.ref_rows < 1 || protocol.ref_cols < 1 || protocol.ref_rows * protocol.ref_cols < 2) {
        throw ConfigError("config: reference lattice needs at least 2 sites");
    }
    for (int n : protocol.n_cycles) {
        if (n < 0) throw ConfigError("config: protocol.n_cycles entries must be >= 0");
    }
    double fsum = 0.0;
    for (double f : protocol.spacing.fractions) {
        if (f < 0.0) throw ConfigError("config: negative WAHUHA delay fraction");
        fsum += f;
    }
    if (std::abs(fsum - 1.0) > 1e-9) throw ConfigError("config: WAHUHA delay fractions must sum to 1");
    for (const auto& [r, c] : scaling.sizes) {
        if (r < 1 || c < 1) throw ConfigError("config: scaling sizes must be positive");
    }
    for (int n : oat.sizes) {
        if (n < 2) throw ConfigError("config: oat sizes must be >= 2");
    }
    if (oat.chi_MHz && !(*oat.chi_MHz > 0.0)) throw ConfigError("config: oat.chi_MHz must be positive");
    if (oat.n_times < 5) throw ConfigError("config: oat.n_times must be >= 5");
    if (theta_scan.n_theta < 4) throw ConfigError("config: theta_scan.n_theta must be >= 4");
    if (semiclassical.n_atoms < 1) throw ConfigError("config: semiclassical.n_atoms must be >= 1");
    if (semiclassical.n_points < 100) throw ConfigError("config: semiclassical.n_points must be >= 100");
    if (!(semiclassical.m_xy > 0.0 && semiclassical.m_xy <= 1.0)) {
        throw ConfigError("config: semiclassical.m_xy must lie in (0, 1]");
    }
    for (int k : sm.k) {
        if (k < 1 || k > 64) throw ConfigError("config: sm_bounds.k entries must lie in [1, 64]");
    }
    if (sm.n_points < 2) throw ConfigError("config: sm_bounds.n_points must be >= 2");
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value for '" + where + "." + key + "'");
    }
}

HamiltonianKind parse_kind(const std::string& s) {
    if (s == "xy") return HamiltonianKind::XY;
    if (s == "heisenberg") return HamiltonianKind::Heisenberg;
    if (s == "zz") return HamiltonianKind::ZZ;
    if (s == "oat") return HamiltonianKind::OAT;
    throw ConfigError("config: unknown hamiltonian '" + s + "'");
}

const char* kind_name(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::XY: return "xy";
        case HamiltonianKind::Heisenberg: return "heisenberg";
        case HamiltonianKind::ZZ: return "zz";
        case HamiltonianKind::OAT: return "oat";
    }
    return "xy";
}

const char* protocol_name(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::quench: return "quench";
        case ProtocolKind::multistep: return "multistep";
        case ProtocolKind::floquet: return "floquet";
    }
    return "quench";
}

PulseModel parse_pulse_model(const json& j, const std::string& where) {
    check_keys(j, where, {"type", "rabi_MHz", "half_width_ns", "interactions_on", "max_substep_us"});
    std::string type = "instantaneous";
    read(j, "type", type, where);
    PulseModel m;
    if (type == "instantaneous") {
        m = PulseModel::instantaneous();
    } else if (type == "square") {
        m = PulseModel::square(22.2);
    } else if (type == "gaussian") {
        m = PulseModel::gaussian(6.5);
    } else {
        throw ConfigError("config: unknown pulse type '" + type + "' in " + where);
    }
    read(j, "rabi_MHz", m.rabi_MHz, where);
    read(j, "half_width_ns", m.half_width_ns, where);
    read(j, "interactions_on", m.interactions_on, where);
    read(j, "max_substep_us", m.max_substep_us, where);
    if (!(m.rabi_MHz > 0.0) || !(m.half_width_ns > 0.0) || !(m.max_substep_us > 0.0)) {
        throw ConfigError("config: pulse parameters in " + where + " must be positive");
    }
    return m;
}

json pulse_model_json(const PulseModel& m) {
    json j;
    j["type"] = !m.finite ? "instantaneous" : (m.shape == PulseShape::square ? "square" : "gaussian");
    j["rabi_MHz"] = m.rabi_MHz;
    j["half_width_ns"] = m.half_width_ns;
    j["interactions_on"] = m.interactions_on;
    j["max_substep_us"] = m.max_substep_us;
    return j;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    check_keys(j, "config", {"version", "lattice", "J_MHz", "hamiltonian", "protocol", "errors", "shots",
                             "realizations", "bootstrap", "time", "seed", "krylov", "workers", "output",
                             "half_window", "scaling", "oat", "theta_scan", "semiclassical", "sm_bounds"});
    if (!j.contains("version")) throw ConfigError("config: missing 'version'");
    RunConfig c;
    read(j, "version", c.version, "config");
    read(j, "J_MHz", c.J_MHz, "config");
    read(j, "shots", c.shots, "config");
    read(j, "realizations", c.realizations, "config");
    read(j, "bootstrap", c.bootstrap, "config");
    read(j, "seed", c.seed, "config");
    read(j, "workers", c.workers, "config");
    read(j, "half_window", c.half_window, "config");
    if (j.contains("hamiltonian")) {
        std::string k;
        read(j, "hamiltonian", k, "config");
        c.hamiltonian = parse_kind(k);
    }

    if (j.contains("lattice")) {
        const json& l = j["lattice"];
        check_keys(l, "lattice", {"rows", "cols", "spacing_um", "boundary", "holes"});
        read(l, "rows", c.lattice.rows, "lattice");
        read(l, "cols", c.lattice.cols, "lattice");
        read(l, "spacing_um", c.lattice.spacing_um, "lattice");
        std::string b = "open";
        read(l, "boundary", b, "lattice");
        if (b == "open") {
            c.lattice.boundary = Boundary::open;
        } else if (b == "periodic") {
            c.lattice.boundary = Boundary::periodic;
        } else {
            throw ConfigError("config: lattice.boundary must be 'open' or 'periodic'");
        }
        std::vector<int> holes;
        read(l, "holes", holes, "lattice");
        c.lattice.holes = std::set<int>(holes.begin(), holes.end());
    }

    if (j.contains("protocol")) {
        const json& p = j["protocol"];
        check_keys(p, "protocol", {"kind", "preparation", "pulse", "t1_us", "angle_deg", "t1_ref_us", "ref_rows",
                                   "ref_cols", "t_F_us", "n_cycles", "insert_at_us", "wahuha_fractions"});
        std::string kind = "quench";
        read(p, "kind", kind, "protocol");
        if (kind == "quench") {
            c.protocol.kind = ProtocolKind::quench;
        } else if (kind == "multistep") {
            c.protocol.kind = ProtocolKind::multistep;
        } else if (kind == "floquet") {
            c.protocol.kind = ProtocolKind::floquet;
        } else {
            throw ConfigError("config: unknown protocol.kind '" + kind + "'");
        }
        if (p.contains("preparation")) c.protocol.preparation = parse_pulse_model(p["preparation"], "protocol.preparation");
        if (p.contains("pulse")) c.protocol.pulse = parse_pulse_model(p["pulse"], "protocol.pulse");
        read(p, "t1_us", c.protocol.t1_us, "protocol");
        if (p.contains("angle_deg") && !p["angle_deg"].is_null()) {
            double deg = 0.0;
            read(p, "angle_deg", deg, "protocol");
            c.protocol.angle_rad = deg * std::numbers::pi / 180.0;
        }
        read(p, "t1_ref_us", c.protocol.t1_ref_us, "protocol");
        read(p, "ref_rows", c.protocol.ref_rows, "protocol");
        read(p, "ref_cols", c.protocol.ref_cols, "protocol");
        read(p, "t_F_us", c.protocol.t_F_us, "protocol");
        read(p, "n_cycles", c.protocol.n_cycles, "protocol");
        if (p.contains("insert_at_us") && !p["insert_at_us"].is_null()) {
            double t = 0.0;
            read(p, "insert_at_us", t, "protocol");
            c.protocol.insert_at_us = t;
        }
        if (p.contains("wahuha_fractions")) {
            std::vector<double> f;
            read(p, "wahuha_fractions", f, "protocol");
            if (f.size() != 5) throw ConfigError("config: protocol.wahuha_fractions needs 5 entries");
            std::copy(f.begin(), f.end(), c.protocol.spacing.fractions.begin());
        }
    }

    if (j.contains("errors")) {
        const json& e = j["errors"];
        check_keys(e, "errors", {"eta", "eps_up", "eps_down", "rotation_bias_deg"});
        c.errors = ErrorModel{};
        read(e, "eta", c.errors.eta, "errors");
        read(e, "eps_up", c.errors.eps_up, "errors");
        read(e, "eps_down", c.errors.eps_down, "errors");
        read(e, "rotation_bias_deg", c.errors.rotation_bias_deg, "errors");
    }

    if (j.contains("time")) {
        const json& t = j["time"];
        check_keys(t, "time", {"start_us", "stop_us", "step_us", "times_us"});
        read(t, "start_us", c.time.start_us, "time");
        read(t, "stop_us", c.time.stop_us, "time");
        read(t, "step_us", c.time.step_us, "time");
        read(t, "times_us", c.time.explicit_us, "time");
    }

    if (j.contains("krylov")) {
        const json& k = j["krylov"];
        check_keys(k, "krylov", {"max_dim", "step_us", "tol", "max_sites"});
        read(k, "max_dim", c.krylov.max_dim, "krylov");
        read(k, "step_us", c.krylov.step_us, "krylov");
        read(k, "tol", c.krylov.tol, "krylov");
        read(k, "max_sites", c.krylov.max_sites, "krylov");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "output", {"dir", "svg"});
        read(o, "dir", c.out_dir, "output");
        read(o, "svg", c.svg, "output");
    }

    if (j.contains("scaling")) {
        const json& s = j["scaling"];
        check_keys(s, "scaling", {"sizes"});
        std::vector<std::vector<int>> sizes;
        read(s, "sizes", sizes, "scaling");
        if (s.contains("sizes")) {
            c.scaling.sizes.clear();
            for (const auto& rc : sizes) {
                if (rc.size() != 2) throw ConfigError("config: scaling.sizes entries must be [rows, cols]");
                c.scaling.sizes.emplace_back(rc[0], rc[1]);
            }
        }
    }

    if (j.contains("oat")) {
        const json& o = j["oat"];
        check_keys(o, "oat", {"sizes", "chi_MHz", "n_times"});
        read(o, "sizes", c.oat.sizes, "oat");
        read(o, "n_times", c.oat.n_times, "oat");
        if (o.contains("chi_MHz") && !o["chi_MHz"].is_null()) {
            double chi = 0.0;
            read(o, "chi_MHz", chi, "oat");
            c.oat.chi_MHz = chi;
        }
    }

    if (j.contains("theta_scan")) {
        const json& t = j["theta_scan"];
        check_keys(t, "theta_scan", {"t_us", "n_theta"});
        read(t, "t_us", c.theta_scan.t_us, "theta_scan");
        read(t, "n_theta", c.theta_scan.n_theta, "theta_scan");
    }

    if (j.contains("semiclassical")) {
        const json& s = j["semiclassical"];
        check_keys(s, "semiclassical", {"n_atoms", "n_points", "m_xy", "J_tilde_MHz", "snapshot_times_us"});
        read(s, "n_atoms", c.semiclassical.n_atoms, "semiclassical");
        read(s, "n_points", c.semiclassical.n_points, "semiclassical");
        read(s, "m_xy", c.semiclassical.m_xy, "semiclassical");
        read(s, "snapshot_times_us", c.semiclassical.snapshot_times_us, "semiclassical");
        if (s.contains("J_tilde_MHz") && !s["J_tilde_MHz"].is_null()) {
            double v = 0.0;
            read(s, "J_tilde_MHz", v, "semiclassical");
            c.semiclassical.J_tilde_MHz = v;
        }
    }

    if (j.contains("sm_bounds")) {
        const json& s = j["sm_bounds"];
        check_keys(s, "sm_bounds", {"k", "n_points"});
        read(s, "k", c.sm.k, "sm_bounds");
        read(s, "n_points", c.sm.n_points, "sm_bounds");
    }

    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["version"] = c.version;
    j["lattice"] = {{"rows", c.lattice.rows},
                    {"cols", c.lattice.cols},
                    {"spacing_um", c.lattice.spacing_um},
                    {"boundary", c.lattice.boundary == Boundary::open ? "open" : "periodic"},
                    {"holes", std::vector<int>(c.lattice.holes.begin(), c.lattice.holes.end())}};
    j["J_MHz"] = c.J_MHz;
    j["hamiltonian"] = kind_name(c.hamiltonian);

    json p;
    p["kind"] = protocol_name(c.protocol.kind);
    p["preparation"] = pulse_model_json(c.protocol.preparation);
    p["pulse"] = pulse_model_json(c.protocol.pulse);
    p["t1_us"] = c.protocol.t1_us;
    p["angle_deg"] = c.protocol.angle_rad ? json(*c.protocol.angle_rad * 180.0 / std::numbers::pi) : json(nullptr);
    p["t1_ref_us"] = c.protocol.t1_ref_us;
    p["ref_rows"] = c.protocol.ref_rows;
    p["ref_cols"] = c.protocol.ref_cols;
    p["t_F_us"] = c.protocol.t_F_us;
    p["n_cycles"] = c.protocol.n_cycles;
    p["insert_at_us"] = c.protocol.insert_at_us ? json(*c.protocol.insert_at_us) : json(nullptr);
    p["wahuha_fractions"] = std::vector<double>(c.protocol.spacing.fractions.begin(), c.protocol.spacing.fractions.end());
    j["protocol"] = p;

    const ErrorModel ideal = ErrorModel::ideal();
    const ErrorModel& e = c.errors;
    if (e.eta != ideal.eta || e.eps_up != ideal.eps_up || e.eps_down != ideal.eps_down ||
        e.rotation_bias_deg != ideal.rotation_bias_deg) {
        j["errors"] = {{"eta", e.eta}, {"eps_up", e.eps_up}, {"eps_down", e.eps_down},
                       {"rotation_bias_deg", e.rotation_bias_deg}};
    }
    j["shots"] = c.shots;
    j["realizations"] = c.realizations;
    j["bootstrap"] = c.bootstrap;
    if (!c.time.explicit_us.empty()) {
        j["time"] = {{"times_us", c.time.explicit_us}};
    } else {
        j["time"] = {{"start_us", c.time.start_us}, {"stop_us", c.time.stop_us}, {"step_us", c.time.step_us}};
    }
    j["seed"] = c.seed;
    j["krylov"] = {{"max_dim", c.krylov.max_dim},
                   {"step_us", c.krylov.step_us},
                   {"tol", c.krylov.tol},
                   {"max_sites", c.krylov.max_sites}};
    j["workers"] = c.workers;
    j["output"] = {{"dir", c.out_dir}, {"svg", c.svg}};
    j["half_window"] = c.half_window;

    json sizes = json::array();
    for (const auto& [r, cc] : c.scaling.sizes) sizes.push_back({r, cc});
    j["scaling"] = {{"sizes", sizes}};
    j["oat"] = {{"sizes", c.oat.sizes},
                {"chi_MHz", c.oat.chi_MHz ? json(*c.oat.chi_MHz) : json(nullptr)},
                {"n_times", c.oat.n_times}};
    j["theta_scan"] = {{"t_us", c.theta_scan.t_us}, {"n_theta", c.theta_scan.n_theta}};
    j["semiclassical"] = {{"n_atoms", c.semiclassical.n_atoms},
                          {"n_points", c.semiclassical.n_points},
                          {"m_xy", c.semiclassical.m_xy},
                          {"J_tilde_MHz", c.semiclassical.J_tilde_MHz ? json(*c.semiclassical.J_tilde_MHz) : json(nullptr)},
                          {"snapshot_times_us", c.semiclassical.snapshot_times_us}};
    j["sm_bounds"] = {{"k", c.sm.k}, {"n_points", c.sm.n_points}};
    return j.dump(2);
}

}  // namespace spinsq
