// spinsq: command-line front end for the spin-squeezing simulator.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinsq/analysis.hpp"
#include "spinsq/config.hpp"
#include "spinsq/error_models.hpp"
#include "spinsq/errors.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/output.hpp"
#include "spinsq/rotor.hpp"
#include "spinsq/semiclassical.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinsq;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> shots;
    bool exact_only = false;
    bool svg = false;
};

RunConfig resolve_config(const Globals& g) {
    RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.out_dir) cfg.out_dir = *g.out_dir;
    if (g.shots) cfg.shots = *g.shots;
    if (g.exact_only) cfg.shots = 0;
    if (g.svg) cfg.svg = true;
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string path_in(const RunConfig& cfg, const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); }

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json optimum_json(const Optimum& o) {
    return {{"t_us", number(o.t_us)}, {"xi2", number(o.xi2)}, {"xi2_dB", number(o.xi2_dB)}, {"fallback", o.fallback}};
}

json try_optimum(const std::vector<SqueezingRecord>& r, int half_window) {
    try {
        return optimum_json(extract_optimum(r, half_window));
    } catch (const NumericalError& e) {
        return {{"error", e.what()}};
    }
}

json fit_json(const PowerLawFit& f) {
    return {{"slope", f.slope}, {"slope_se", f.slope_se}, {"log_prefactor", f.log_prefactor},
            {"log_prefactor_se", f.log_prefactor_se}, {"n", f.n}};
}

json base_summary(const std::string& command, const RunConfig& cfg) {
    return {{"command", command},
            {"tool_version", kToolVersion},
            {"config_version", cfg.version},
            {"seed", cfg.seed},
            {"config", json::parse(config_to_json(cfg))},
            {"error_bars", "bootstrap standard errors"},
            {"xi2_normalization", "number of imaged atoms (failed STIRAP atoms included)"}};
}

void save_summary(const RunConfig& cfg, const std::string& name, const json& j) {
    write_text(path_in(cfg, name), j.dump(2) + "\n");
}

std::string slug(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    }
    return s;
}

json series_summary(const Series& s, int half_window) {
    json j{{"label", s.label},
           {"n_imaged", s.n_imaged},
           {"optimum_exact", try_optimum(s.exact_records(), half_window)},
           {"optimum_raw", try_optimum(s.raw_records(), half_window)},
           {"optimum_corrected", try_optimum(s.corrected_records(), half_window)}};
    if (!s.points.empty() && s.points.front().has_shots) {
        j["optimum_shot_raw"] = try_optimum(s.best_raw_records(), half_window);
        j["optimum_shot_corrected"] = try_optimum(s.best_corrected_records(), half_window);
    }
    return j;
}

PlotSpec xi2_plot(const std::string& title, const std::vector<const Series*>& list) {
    PlotSpec p{title, "t (us)", "xi^2 (dB)", {}, 0.0};
    for (const Series* s : list) {
        PlotSeries ex{s->label + " exact", {}, {}, false};
        PlotSeries raw{s->label + " raw", {}, {}, true};
        PlotSeries shot{s->label + " shots", {}, {}, true};
        bool errors = false;
        for (const auto& pt : s->points) {
            ex.x.push_back(pt.t_us), ex.y.push_back(pt.exact.xi2_dB);
            raw.x.push_back(pt.t_us), raw.y.push_back(pt.raw.xi2_dB);
            errors = errors || pt.raw.xi2 != pt.exact.xi2;
            if (pt.has_shots) shot.x.push_back(pt.t_us), shot.y.push_back(pt.shot_raw.xi2_dB);
        }
        p.series.push_back(ex);
        if (errors) p.series.push_back(raw);
        if (!shot.x.empty()) p.series.push_back(shot);
    }
    return p;
}

void write_series(const RunConfig& cfg, const std::string& prefix, const Series& s) {
    series_table(s).save(path_in(cfg, prefix + "_" + slug(s.label) + ".csv"));
}

// ------------------------------------------------------------ commands --

int cmd_simulate(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    const std::vector<Series> all = simulate(cfg);
    json j = base_summary("simulate", cfg);
    j["series"] = json::array();
    std::vector<const Series*> ptrs;
    for (const Series& s : all) {
        write_series(cfg, "simulate", s);
        j["series"].push_back(series_summary(s, cfg.half_window));
        ptrs.push_back(&s);
    }
    save_summary(cfg, "simulate_summary.json", j);
    if (cfg.svg) write_text(path_in(cfg, "simulate.svg"), render_svg(xi2_plot("Squeezing parameter", ptrs)));
    std::cout << "simulate: " << all.size() << " series written to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_theta_scan(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    const ThetaScanResult r = theta_scan(cfg, cfg.theta_scan.t_us, theta_grid(cfg.theta_scan.n_theta));
    const double q = 0.25 * r.n_imaged;
    Table t;
    t.columns = {"theta", "var", "var_se", "exact_var", "norm_var", "norm_var_se", "uncorrelated_ref"};
    for (const auto& row : r.rows) t.add({row.theta, row.var, row.var_se, row.exact_var, row.var / q, row.var_se / q, 1.0});
    t.save(path_in(cfg, "theta_scan.csv"));
    json j = base_summary("theta-scan", cfg);
    j["t_us"] = r.t_us;
    j["n_imaged"] = r.n_imaged;
    j["fit"] = {{"offset", r.fit.offset},       {"amplitude", r.fit.amplitude},
                {"amplitude_se", r.fit.amplitude_se}, {"theta_star", r.fit.theta_star},
                {"theta_star_se", r.fit.theta_star_se}, {"residual_rms", r.fit.residual_rms},
                {"degenerate", r.fit.degenerate}};
    j["exact_theta_star"] = r.exact_theta_star;
    j["exact_min_var"] = r.exact_min_var;
    save_summary(cfg, "theta_scan_summary.json", j);
    if (cfg.svg) {
        PlotSpec p{"Variance vs analysis angle", "theta (rad)", "4 Var / N", {}, 1.0};
        PlotSeries s{"shots", {}, {}, true}, e{"exact", {}, {}, false};
        for (const auto& row : r.rows) {
            s.x.push_back(row.theta), s.y.push_back(row.var / q);
            e.x.push_back(row.theta), e.y.push_back(row.exact_var / q);
        }
        p.series = {e, s};
        write_text(path_in(cfg, "theta_scan.svg"), render_svg(p));
    }
    std::cout << "theta-scan: theta* = " << r.fit.theta_star << " (exact " << r.exact_theta_star << ")\n";
    return 0;
}

void write_scaling(const RunConfig& cfg, const std::string& name, const ScalingResult& r, json& j) {
    Table t;
    t.columns = {"n_atoms", "ok", "xi2_raw", "xi2_raw_dB", "t_raw_us", "xi2_corrected", "xi2_corrected_dB",
                 "t_corrected_us"};
    j["entries"] = json::array();
    for (const auto& e : r.entries) {
        t.add({static_cast<double>(e.n_atoms), e.ok ? 1.0 : 0.0, e.raw.xi2, e.raw.xi2_dB, e.raw.t_us,
               e.corrected.xi2, e.corrected.xi2_dB, e.corrected.t_us});
        json ej{{"label", e.label}, {"n_atoms", e.n_atoms}, {"ok", e.ok}};
        if (e.ok) {
            ej["raw"] = optimum_json(e.raw);
            ej["corrected"] = optimum_json(e.corrected);
        } else {
            ej["error"] = e.error;
        }
        j["entries"].push_back(ej);
    }
    t.save(path_in(cfg, name + ".csv"));
    j["fitted"] = r.fitted;
    if (r.fitted) {
        j["nu"] = {{"raw", -r.xi2_raw.slope}, {"raw_se", r.xi2_raw.slope_se},
                   {"corrected", -r.xi2_corrected.slope}, {"corrected_se", r.xi2_corrected.slope_se}};
        j["mu"] = {{"raw", r.t_raw.slope}, {"raw_se", r.t_raw.slope_se},
                   {"corrected", r.t_corrected.slope}, {"corrected_se", r.t_corrected.slope_se}};
        j["fits"] = {{"xi2_raw", fit_json(r.xi2_raw)}, {"t_raw", fit_json(r.t_raw)},
                     {"xi2_corrected", fit_json(r.xi2_corrected)}, {"t_corrected", fit_json(r.t_corrected)}};
    }
    j["fit_note"] = "raw and corrected optima are fitted independently, each on its own time grid optimum";
    j["experimental_reference"] = {{"nu", kExperimentNu}, {"nu_err", kExperimentNuErr},
                                   {"mu", kExperimentMu}, {"mu_err", kExperimentMuErr}};
    if (cfg.svg) {
        PlotSpec p{"Optimal squeezing vs N", "N", "xi^2*", {}, std::nullopt, true, true};
        PlotSeries a{"raw", {}, {}, true}, b{"corrected", {}, {}, true};
        for (const auto& e : r.entries) {
            if (!e.ok) continue;
            a.x.push_back(e.n_atoms), a.y.push_back(e.raw.xi2);
            b.x.push_back(e.n_atoms), b.y.push_back(e.corrected.xi2);
        }
        p.series = {a, b};
        write_text(path_in(cfg, name + ".svg"), render_svg(p));
    }
}

int cmd_scaling(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    const ScalingResult r = scaling_sweep(cfg, cfg.scaling.sizes);
    json j = base_summary("scaling", cfg);
    write_scaling(cfg, "scaling", r, j);
    save_summary(cfg, "scaling_summary.json", j);
    if (r.fitted) std::cout << "scaling: nu = " << r.nu() << ", mu = " << r.mu() << "\n";
    else std::cout << "scaling: fewer than 3 sizes succeeded; no fit\n";
    return 0;
}

int cmd_oat(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    const ScalingResult r = oat_scaling(cfg.oat.sizes, cfg.J_MHz, cfg.oat.chi_MHz);
    json j = base_summary("oat", cfg);
    write_scaling(cfg, "oat_scaling", r, j);
    j["chi_rule"] = cfg.oat.chi_MHz ? "fixed" : "chi = J S / N, S = square-lattice sum of r^-3";
    PlotSpec p{"One-axis twisting", "t (us)", "xi^2 (dB)", {}, 0.0};
    for (const auto& e : r.entries) {
        const double chi = cfg.oat.chi_MHz ? *cfg.oat.chi_MHz : oat_kac_chi(e.n_atoms, cfg.J_MHz);
        std::vector<double> grid;
        for (int i = 0; i < cfg.oat.n_times; ++i) grid.push_back(2.0 * e.raw.t_us * (i + 1) / cfg.oat.n_times);
        const auto rec = oat_squeezing_curve(e.n_atoms, chi, grid);
        Table t;
        t.columns = {"t_us", "mean_spin", "theta_star", "min_var", "xi2", "xi2_dB", "rotor_magnetization"};
        PlotSeries ps{"N=" + std::to_string(e.n_atoms), {}, {}, false};
        for (const auto& x : rec) {
            t.add({x.t_us, x.mean_spin, x.theta_star, x.min_var, x.xi2, x.xi2_dB, x.mean_spin / (0.5 * e.n_atoms)});
            ps.x.push_back(x.t_us), ps.y.push_back(x.xi2_dB);
        }
        t.save(path_in(cfg, "oat_curve_N" + std::to_string(e.n_atoms) + ".csv"));
        p.series.push_back(ps);
    }
    save_summary(cfg, "oat_summary.json", j);
    if (cfg.svg) write_text(path_in(cfg, "oat_curves.svg"), render_svg(p));
    std::cout << "oat: nu = " << r.nu() << ", mu = " << r.mu() << "\n";
    return 0;
}

int cmd_floquet(const Globals& g) {
    RunConfig cfg = resolve_config(g);
    const FloquetResult r = floquet_experiment(cfg, cfg.protocol.n_cycles);
    json j = base_summary("floquet", cfg);
    j["t_insert_us"] = r.t_insert_us;
    j["runs"] = json::array();
    double base = 0.0;
    std::vector<const Series*> ptrs;
    for (const auto& run : r.runs) {
        write_series(cfg, "floquet", run.series);
        if (run.n_cycles == 0) base = run.sub_sql.t_us;
        json rj = series_summary(run.series, cfg.half_window);
        rj["n_cycles"] = run.n_cycles;
        rj["sub_sql_duration_us"] = run.sub_sql.t_us;
        rj["sub_sql_crossed"] = run.sub_sql.crossed;
        j["runs"].push_back(rj);
        ptrs.push_back(&run.series);
    }
    if (base > 0.0) {
        for (auto& rj : j["runs"]) rj["duration_ratio"] = rj["sub_sql_duration_us"].get<double>() / base;
    }
    save_summary(cfg, "floquet_summary.json", j);
    if (cfg.svg) write_text(path_in(cfg, "floquet.svg"), render_svg(xi2_plot("Floquet freezing", ptrs)));
    std::cout << "floquet: insertion at " << r.t_insert_us << " us, " << r.runs.size() << " runs\n";
    return 0;
}

int cmd_multistep(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    const MultistepResult r = multistep_experiment(cfg);
    write_series(cfg, "multistep", r.single);
    write_series(cfg, "multistep", r.multi);
    json j = base_summary("multistep", cfg);
    j["plan"] = {{"t1_us", r.plan.t1_us},
                 {"angle_deg", r.plan.angle_rad * 180.0 / std::numbers::pi},
                 {"shear", r.plan.shear}};
    j["single"] = series_summary(r.single, cfg.half_window);
    j["multi"] = series_summary(r.multi, cfg.half_window);
    save_summary(cfg, "multistep_summary.json", j);
    if (cfg.svg) write_text(path_in(cfg, "multistep.svg"), render_svg(xi2_plot("Multi-step squeezing", {&r.single, &r.multi})));
    std::cout << "multistep: t1 = " << r.plan.t1_us << " us, rotation " << r.plan.angle_rad * 180.0 / std::numbers::pi
              << " deg\n";
    return 0;
}

int cmd_sm_bounds(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    Table t;
    t.columns = {"mean_fraction"};
    std::vector<std::vector<DepthBoundPoint>> curves;
    for (int k : cfg.sm.k) {
        t.columns.push_back("k" + std::to_string(k));
        curves.push_back(sm_depth_bound(k, cfg.sm.n_points));
    }
    PlotSpec p{"Entanglement-depth bounds", "|<J_y>| / (N/2)", "4 Var / N", {}, std::nullopt};
    for (int i = 0; i < cfg.sm.n_points; ++i) {
        std::vector<double> row{curves.front()[static_cast<std::size_t>(i)].mean_fraction};
        for (const auto& c : curves) row.push_back(c[static_cast<std::size_t>(i)].norm_var);
        t.add(row);
    }
    for (std::size_t k = 0; k < curves.size(); ++k) {
        PlotSeries s{"k=" + std::to_string(cfg.sm.k[k]), {}, {}, false};
        for (const auto& pt : curves[k]) s.x.push_back(pt.mean_fraction), s.y.push_back(pt.norm_var);
        p.series.push_back(s);
    }
    t.save(path_in(cfg, "sm_bounds.csv"));
    json j = base_summary("sm-bounds", cfg);
    j["k"] = cfg.sm.k;
    save_summary(cfg, "sm_bounds_summary.json", j);
    if (cfg.svg) write_text(path_in(cfg, "sm_bounds.svg"), render_svg(p));
    std::cout << "sm-bounds: " << curves.size() << " curves\n";
    return 0;
}

int cmd_semiclassical(const Globals& g) {
    const RunConfig cfg = resolve_config(g);
    const SemiclassicalConfig& sc = cfg.semiclassical;
    const double chi = moment_of_inertia(coupling_matrix(cfg.lattice), cfg.J_MHz);
    const double jt = sc.J_tilde_MHz ? *sc.J_tilde_MHz : sc_default_J_tilde(sc.n_atoms, chi);
    const ClassicalEnsemble e0 = ClassicalEnsemble::gaussian(sc.n_atoms, sc.n_points, jt, sc.m_xy, cfg.seed);
    Table t;
    t.columns = {"t_us", "theta_star", "min_var", "xi2_proxy", "var_x", "var_z", "cov_xz", "degenerate"};
    json j = base_summary("semiclassical", cfg);
    j["J_tilde_MHz"] = jt;
    j["m_xy"] = sc.m_xy;
    j["note"] = "xi2_proxy = min_var / (N/4); the classical model does not track mean-spin shortening";
    ClassicalEnsemble last = e0;
    for (std::size_t i = 0; i < sc.snapshot_times_us.size(); ++i) {
        const double ts = sc.snapshot_times_us[i];
        last = sc_evolve(e0, ts);
        const ScSqueezing q = sc_squeezing(last);
        t.add({ts, q.theta_star, q.min_var, q.xi2_proxy, q.var_x, q.var_z, q.cov_xz, q.degenerate ? 1.0 : 0.0});
        std::ofstream pts(path_in(cfg, "semiclassical_points_" + std::to_string(i) + ".csv"));
        write_points_csv(pts, last);
    }
    t.save(path_in(cfg, "semiclassical.csv"));
    save_summary(cfg, "semiclassical_summary.json", j);
    if (cfg.svg) {
        PlotSpec p{"Classical ensemble", "x", "z", {}, std::nullopt};
        PlotSeries s{"t = " + format_number(sc.snapshot_times_us.empty() ? 0.0 : sc.snapshot_times_us.back()) + " us", {}, {}, true};
        const int stride = std::max(1, last.n_points() / 2000);
        for (int k = 0; k < last.n_points(); k += stride) {
            s.x.push_back(last.points[static_cast<std::size_t>(k)][0]);
            s.y.push_back(last.points[static_cast<std::size_t>(k)][1]);
        }
        p.series = {s};
        write_text(path_in(cfg, "semiclassical.svg"), render_svg(p));
    }
    std::cout << "semiclassical: " << sc.snapshot_times_us.size() << " snapshots\n";
    return 0;
}

ShotSet read_shots_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open shots file '" + path + "'");
    return read_shots_csv(in);
}

int cmd_correct(const Globals& g, const std::string& var_path, const std::string& sl_path, const std::string& mode) {
    RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
    if (g.config_path.empty()) cfg.errors = ErrorModel{};
    if (g.out_dir) cfg.out_dir = *g.out_dir;
    if (g.seed) cfg.seed = *g.seed;
    fs::create_directories(cfg.out_dir);
    InverseMode m;
    if (mode == "exact") m = InverseMode::exact;
    else if (mode == "neglect") m = InverseMode::neglect_mean_theta;
    else throw ConfigError("correct: --mode must be 'exact' or 'neglect'");

    const ShotSet vs = read_shots_file(var_path);
    const ShotStatistics v = shot_statistics(vs, cfg.bootstrap, cfg.seed);
    const int n = vs.n_atoms;
    json j{{"command", "correct"}, {"tool_version", kToolVersion}, {"n_atoms", n}, {"mode", mode},
           {"error_model", {{"eps_up", cfg.errors.eps_up}, {"eps_down", cfg.errors.eps_down}}}};
    j["variance_readout"] = {{"shots", v.n}, {"mean", v.mean}, {"mean_se", v.se_mean}, {"var", v.variance}, {"var_se", v.se_variance}};
    Table t;
    t.columns = {"n_atoms", "raw_mean_theta", "raw_var", "corrected_mean_theta", "corrected_var"};
    const ReadoutMoments cv = detection_inverse(v.mean, v.variance, v.mean, n, cfg.errors, m);
    std::vector<double> row{static_cast<double>(n), v.mean, v.variance, cv.mean, cv.var};
    j["corrected_variance"] = cv.var;
    if (!sl_path.empty()) {
        const ShotSet ss = read_shots_file(sl_path);
        if (ss.n_atoms != n) throw ConfigError("correct: the two shot files have different atom counts");
        const ShotStatistics s = shot_statistics(ss, cfg.bootstrap, cfg.seed + 1);
        const ReadoutMoments cs = detection_inverse(s.mean, v.variance, v.mean, n, cfg.errors, m);
        const SqueezingRecord raw = SqueezingRecord::make(0.0, n, s.mean, vs.theta, v.variance);
        const SqueezingRecord cor = SqueezingRecord::make(0.0, n, cs.mean, vs.theta, cv.var);
        j["spin_length_readout"] = {{"shots", s.n}, {"mean", s.mean}, {"mean_se", s.se_mean}};
        j["corrected_mean_spin"] = std::abs(cs.mean);
        j["xi2_raw"] = number(raw.xi2);
        j["xi2_raw_dB"] = number(raw.xi2_dB);
        j["xi2_corrected"] = number(cor.xi2);
        j["xi2_corrected_dB"] = number(cor.xi2_dB);
        t.columns.insert(t.columns.end(), {"raw_mean_spin", "corrected_mean_spin", "xi2_raw", "xi2_corrected"});
        row.insert(row.end(), {std::abs(s.mean), std::abs(cs.mean), raw.xi2, cor.xi2});
    }
    t.add(row);
    t.save(path_in(cfg, "correct.csv"));
    write_text(path_in(cfg, "correct_summary.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-squeezing simulator for 2D dipolar XY arrays"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON run config")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "override the config seed");
    app.add_option("--out-dir", g.out_dir, "output directory");
    app.add_option("--shots", g.shots, "shots per readout setting (0 = exact moments only)");
    app.add_flag("--exact-only", g.exact_only, "skip shot sampling");
    app.add_flag("--svg", g.svg, "also write SVG plots");

    std::string var_path, sl_path, mode = "exact";
    auto* simulate = app.add_subcommand("simulate", "time series for one config");
    auto* theta = app.add_subcommand("theta-scan", "variance vs analysis angle with sinusoid fit");
    auto* scaling = app.add_subcommand("scaling", "optimal squeezing vs lattice size, power-law fits");
    auto* floquet = app.add_subcommand("floquet", "WAHUHA freezing for several cycle counts");
    auto* multistep = app.add_subcommand("multistep", "single- vs multi-step protocol");
    auto* oat = app.add_subcommand("oat", "one-axis-twisting scaling in the symmetric sector");
    auto* sm = app.add_subcommand("sm-bounds", "entanglement-depth bound curves");
    auto* semi = app.add_subcommand("semiclassical", "classical twisting ensemble snapshots");
    auto* correct = app.add_subcommand("correct", "detection-error inversion of imported shots");
    correct->add_option("--variance", var_path, "variance-readout shots CSV")->required()->check(CLI::ExistingFile);
    correct->add_option("--spin-length", sl_path, "spin-length-readout shots CSV")->check(CLI::ExistingFile);
    correct->add_option("--mode", mode, "exact | neglect");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*simulate) return cmd_simulate(g);
        if (*theta) return cmd_theta_scan(g);
        if (*scaling) return cmd_scaling(g);
        if (*floquet) return cmd_floquet(g);
        if (*multistep) return cmd_multistep(g);
        if (*oat) return cmd_oat(g);
        if (*sm) return cmd_sm_bounds(g);
        if (*semi) return cmd_semiclassical(g);
        if (*correct) return cmd_correct(g, var_path, sl_path, mode);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
