#include "spinsq/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

#include "spinsq/errors.hpp"
#include "spinsq/rng.hpp"
#include "spinsq/rotor.hpp"
#include "spinsq/semiclassical.hpp"

namespace spinsq {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_half_pi(double th) {
    while (th > 0.5 * pi) th -= pi;
    while (th <= -0.5 * pi) th += pi;
    return th;
}

/// Neumaier-compensated running sum.
class Sum {
public:
    void add(double x) {
        const double t = s_ + x;
        c_ += std::abs(s_) >= std::abs(x) ? (s_ - t) + x : (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    return mix64(mix64(mix64(seed ^ 0x243f6a8885a308d3ULL) ^ a) + mix64(b ^ 0x13198a2e03707344ULL) + c);
}

}  // namespace

// ---------------------------------------------------------------- optima --

Optimum extract_optimum(const std::vector<double>& t, const std::vector<double>& db, int half_window) {
    if (t.size() != db.size()) throw std::invalid_argument("extract_optimum: size mismatch");
    if (t.size() < 5) throw NumericalError("extract_optimum: need at least 5 records");
    if (half_window < 1) throw ConfigError("extract_optimum: half window must be >= 1");
    const int n = static_cast<int>(t.size());
    int best = -1;
    for (int i = 0; i < n; ++i) {
        if (std::isfinite(db[static_cast<std::size_t>(i)]) && (best < 0 || db[static_cast<std::size_t>(i)] < db[static_cast<std::size_t>(best)])) best = i;
    }
    if (best <= 0 || best >= n - 1) throw NumericalError("extract_optimum: no interior minimum on the time grid");

    const int lo = std::max(0, best - half_window);
    const int hi = std::min(n - 1, best + half_window);
    const double t0 = t[static_cast<std::size_t>(best)];
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d aty = Eigen::Vector3d::Zero();
    int used = 0;
    for (int i = lo; i <= hi; ++i) {
        const double y = db[static_cast<std::size_t>(i)];
        if (!std::isfinite(y)) continue;
        const double x = t[static_cast<std::size_t>(i)] - t0;
        const Eigen::Vector3d row(x * x, x, 1.0);
        ata += row * row.transpose();
        aty += row * y;
        ++used;
    }
    Optimum o;
    o.grid_index = best;
    o.t_us = t0;
    o.xi2_dB = db[static_cast<std::size_t>(best)];
    o.fallback = true;
    if (used >= 3) {
        const Eigen::Vector3d c = ata.colPivHouseholderQr().solve(aty);
        const double a = c(0), b = c(1);
        if (a > 0.0) {
            const double tv = t0 - b / (2.0 * a);
            if (tv >= t[static_cast<std::size_t>(lo)] && tv <= t[static_cast<std::size_t>(hi)]) {
                o.t_us = tv;
                o.xi2_dB = c(2) - b * b / (4.0 * a);
                o.fallback = false;
            }
        }
    }
    o.xi2 = std::pow(10.0, o.xi2_dB / 10.0);
    return o;
}

Optimum extract_optimum(const std::vector<SqueezingRecord>& records, int half_window) {
    std::vector<double> t, db;
    for (const auto& r : records) {
        t.push_back(r.t_us);
        db.push_back(r.collapsed ? std::numeric_limits<double>::infinity() : r.xi2_dB);
    }
    return extract_optimum(t, db, half_window);
}

Crossing sub_level_duration(const std::vector<double>& t, const std::vector<double>& xi2, double level) {
    if (t.size() != xi2.size() || t.empty()) throw std::invalid_argument("sub_level_duration: bad series");
    std::size_t i0 = 0;
    while (i0 < t.size() && !(xi2[i0] < level)) ++i0;
    if (i0 == t.size()) return {t.front(), false};
    for (std::size_t j = i0 + 1; j < t.size(); ++j) {
        if (!(xi2[j] < level)) {
            const double x0 = xi2[j - 1], x1 = xi2[j];
            const double f = std::isfinite(x1) ? (level - x0) / (x1 - x0) : 0.0;
            return {t[j - 1] + f * (t[j] - t[j - 1]), true};
        }
    }
    return {t.back(), false};
}

// ---------------------------------------------------------------- fits --

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (x.size() < 3) throw NumericalError("fit_power_law: need at least 3 points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw NumericalError("fit_power_law: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw NumericalError("fit_power_law: sizes must not all coincide");
    PowerLawFit f;
    f.n = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.log_prefactor = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - f.log_prefactor - f.slope * lx[i];
        ssr += r * r;
    }
    const double s2 = ssr / static_cast<double>(n - 2);
    f.slope_se = std::sqrt(s2 / sxx);
    f.log_prefactor_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    return f;
}

ScalingResult fit_scaling(std::vector<ScalingEntry> entries) {
    ScalingResult res;
    res.entries = std::move(entries);
    std::vector<double> n, xr, tr, xc, tc;
    for (const auto& e : res.entries) {
        if (!e.ok) continue;
        n.push_back(e.n_atoms);
        xr.push_back(e.raw.xi2);
        tr.push_back(e.raw.t_us);
        xc.push_back(e.corrected.xi2);
        tc.push_back(e.corrected.t_us);
    }
    if (n.size() < 3) return res;
    res.xi2_raw = fit_power_law(n, xr);
    res.t_raw = fit_power_law(n, tr);
    res.xi2_corrected = fit_power_law(n, xc);
    res.t_corrected = fit_power_law(n, tc);
    res.fitted = true;
    return res;
}

SinusoidFit fit_sinusoid(const std::vector<double>& theta, const std::vector<double>& var,
                         const std::vector<double>& se) {
    if (theta.size() != var.size()) throw std::invalid_argument("fit_sinusoid: size mismatch");
    if (theta.size() < 4) throw ConfigError("fit_sinusoid: need at least 4 angles");
    const bool weighted =
        se.size() == theta.size() && std::all_of(se.begin(), se.end(), [](double s) { return s > 0.0; });
    const int n = static_cast<int>(theta.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n), w(n);
    for (int i = 0; i < n; ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = std::cos(2.0 * theta[static_cast<std::size_t>(i)]);
        a(i, 2) = std::sin(2.0 * theta[static_cast<std::size_t>(i)]);
        y(i) = var[static_cast<std::size_t>(i)];
        w(i) = weighted ? 1.0 / (se[static_cast<std::size_t>(i)] * se[static_cast<std::size_t>(i)]) : 1.0;
    }
    const Eigen::Matrix3d normal = a.transpose() * w.asDiagonal() * a;
    const Eigen::Vector3d c = normal.ldlt().solve(a.transpose() * w.asDiagonal() * y);
    const Eigen::VectorXd resid = y - a * c;

    SinusoidFit f;
    f.offset = c(0);
    const double ca = c(1), cb = c(2);
    f.amplitude = std::hypot(ca, cb);
    f.residual_rms = std::sqrt(resid.squaredNorm() / n);

    Eigen::Matrix3d cov = normal.inverse();
    if (!weighted) cov *= n > 3 ? resid.squaredNorm() / (n - 3) : 0.0;
    if (f.amplitude > 0.0) {
        const double r2 = f.amplitude * f.amplitude;
        f.amplitude_se = std::sqrt(std::max(0.0, (ca * ca * cov(1, 1) + cb * cb * cov(2, 2) + 2 * ca * cb * cov(1, 2)) / r2));
        f.theta_star_se =
            0.5 * std::sqrt(std::max(0.0, (cb * cb * cov(1, 1) + ca * ca * cov(2, 2) - 2 * ca * cb * cov(1, 2)))) / r2;
    } else {
        f.amplitude_se = std::sqrt(std::max(cov(1, 1), cov(2, 2)));
    }
    f.theta_star = wrap_half_pi(0.5 * std::atan2(cb, ca) + 0.5 * pi);
    f.degenerate = f.amplitude <= 1e-12 * std::abs(f.offset) || f.amplitude < 2.0 * f.amplitude_se;
    return f;
}

// ------------------------------------------------------------- pipeline --

std::array<double, 3> readout_axis(const Pulse& p) {
    const double s = std::sin(p.angle);
    return {-std::sin(p.phase) * s, std::cos(p.phase) * s, std::cos(p.angle)};
}

Pulse biased(const Pulse& p, double bias_deg) {
    Pulse out = p;
    if (p.angle != 0.0) out.angle += std::copysign(bias_deg * pi / 180.0, p.angle);
    return out;
}

PooledReadout::PooledReadout(std::vector<RealizationMoments> r, int n_imaged) : r_(std::move(r)), n_imaged_(n_imaged) {
    if (r_.empty()) throw std::invalid_argument("PooledReadout: no realizations");
}

double PooledReadout::mean(const std::array<double, 3>& n) const {
    Sum s;
    for (const auto& r : r_) {
        s.add(n[0] * r.m.mean[0] + n[1] * r.m.mean[1] + n[2] * r.m.mean[2] + 0.5 * r.n_failed);
    }
    return s.value() / static_cast<double>(r_.size());
}

double PooledReadout::var(const std::array<double, 3>& n) const {
    // law of total variance over equally weighted realizations
    Sum within, mean, mean2;
    for (const auto& r : r_) {
        double q = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) q += n[a] * n[b] * (r.m.second[a][b] - r.m.mean[a] * r.m.mean[b]);
        }
        within.add(q);
        const double mu = n[0] * r.m.mean[0] + n[1] * r.m.mean[1] + n[2] * r.m.mean[2] + 0.5 * r.n_failed;
        mean.add(mu);
        mean2.add(mu * mu);
    }
    const double k = static_cast<double>(r_.size());
    const double m = mean.value() / k;
    return within.value() / k + std::max(0.0, mean2.value() / k - m * m);
}

ReadoutOptimum optimize_readout(const PooledReadout& p, double bias_deg) {
    ReadoutOptimum o;
    o.spin_length_mean = p.mean(readout_axis(biased(pulses::spin_length_readout(), bias_deg)));
    auto axis = [&](double th) { return readout_axis(biased(pulses::variance_readout(th), bias_deg)); };
    auto f = [&](double th) { return p.var(axis(th)); };

    // the readout variance is a pure period-pi sinusoid iff bias = 0 and the
    // hole count does not fluctuate; detect the latter by its zero variance
    const double hole_var = p.var({0.0, 0.0, 0.0});
    if (bias_deg == 0.0 && hole_var == 0.0) {
        const double vz = f(0.0);
        const double vx = f(0.5 * pi);
        const double cov = 0.5 * (f(0.25 * pi) - f(-0.25 * pi));
        const ThetaStar ts = theta_star(vz, vx, cov);
        o.theta = ts.theta;
        o.min_var = ts.min_var;
    } else {
        const int n_grid = 720;
        const double step = pi / n_grid;
        int best = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_grid; ++i) {
            const double th = -0.5 * pi + (i + 1) * step;
            const double v = f(th);
            if (v < best_v) best_v = v, best = i;
        }
        double a = -0.5 * pi + best * step, b = a + 2.0 * step;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                b = x2, x2 = x1, f2 = f1;
                x1 = b - g * (b - a);
                f1 = f(x1);
            } else {
                a = x1, x1 = x2, f1 = f2;
                x2 = a + g * (b - a);
                f2 = f(x2);
            }
        }
        o.theta = wrap_half_pi(f1 < f2 ? x1 : x2);
        o.min_var = std::min(f1, f2);
        const double grid_th = -0.5 * pi + (best + 1) * step;
        if (best_v < o.min_var) o.theta = grid_th, o.min_var = best_v;
    }
    o.mean_theta = p.mean(axis(o.theta));
    return o;
}

std::vector<SqueezingRecord> Series::exact_records() const {
    std::vector<SqueezingRecord> r;
    for (const auto& p : points) r.push_back(p.exact);
    return r;
}

std::vector<SqueezingRecord> Series::raw_records() const {
    std::vector<SqueezingRecord> r;
    for (const auto& p : points) r.push_back(p.raw);
    return r;
}

std::vector<SqueezingRecord> Series::corrected_records() const {
    std::vector<SqueezingRecord> r;
    for (const auto& p : points) r.push_back(p.corrected);
    return r;
}

std::vector<SqueezingRecord> Series::best_raw_records() const {
    std::vector<SqueezingRecord> r;
    for (const auto& p : points) r.push_back(p.has_shots ? p.shot_raw : p.raw);
    return r;
}

std::vector<SqueezingRecord> Series::best_corrected_records() const {
    std::vector<SqueezingRecord> r;
    for (const auto& p : points) r.push_back(p.has_shots ? p.shot_corrected : p.corrected);
    return r;
}

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
    if (n <= 0) return;
    const int k = std::min(n, std::max(1, workers));
    if (k == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < k; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

HamiltonianSpec make_hamiltonian(const LatticeSpec& lattice, HamiltonianKind kind, double J_MHz) {
    CouplingMatrix cm = coupling_matrix(lattice);
    switch (kind) {
        case HamiltonianKind::XY: return HamiltonianSpec::xy(std::move(cm), J_MHz);
        case HamiltonianKind::Heisenberg: return HamiltonianSpec::heisenberg(std::move(cm), J_MHz);
        case HamiltonianKind::ZZ: return HamiltonianSpec::zz(std::move(cm));
        case HamiltonianKind::OAT: return HamiltonianSpec::oat(lattice.n_atoms(), moment_of_inertia(cm, J_MHz));
    }
    throw ConfigError("unknown Hamiltonian kind");
}

namespace {

struct RealizationRun {
    const RunConfig& cfg;
    const ScheduleBuilder& builder;
    const std::vector<double>& checkpoints;

    /// States of realization `hr` at every checkpoint (empty states when
    /// every atom failed).
    std::vector<StateVector> states(const HoleRealization& hr) const {
        const int n = hr.lattice.n_atoms();
        if (n == 0) return std::vector<StateVector>(checkpoints.size());
        const HamiltonianSpec h = make_hamiltonian(hr.lattice, cfg.hamiltonian, cfg.J_MHz);
        ProtocolSchedule s = builder(h);
        StateVector v0;
        std::vector<double> cps = checkpoints;
        if (cfg.protocol.preparation.finite) {
            const Pulse prep = pulses::preparation(cfg.protocol.preparation);
            s.steps.insert(s.steps.begin(), prep);
            for (double& c : cps) c += prep.duration_us();
            v0 = StateVector::all_up(n);
        } else {
            v0 = prepare_coherent_y(n);
        }
        return run_schedule(s, v0, cps, cfg.krylov);
    }
};

RealizationMoments moments_of(const StateVector& v, int n_failed) {
    RealizationMoments rm;
    rm.n_failed = n_failed;
    if (v.n_sites() > 0) rm.m = collective_expectations(v);
    return rm;
}

std::vector<double> sampled_values(const std::vector<const StateVector*>& states,
                                   const std::vector<HoleRealization>& holes, const Pulse& pulse, int shots,
                                   const ErrorModel& em, std::uint64_t seed) {
    const int n_real = static_cast<int>(states.size());
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(shots));
    for (int r = 0; r < n_real; ++r) {
        // shot k goes to realization k mod R
        const int n_r = shots / n_real + (r < shots % n_real ? 1 : 0);
        if (n_r == 0) continue;
        ShotSet s;
        if (states[static_cast<std::size_t>(r)]->n_sites() > 0) {
            s = sample_shots(*states[static_cast<std::size_t>(r)], pulse, n_r, derive_seed(seed, static_cast<std::uint64_t>(r), 1));
        } else {
            s.n_atoms = 0;
        }
        const int n_failed = holes[static_cast<std::size_t>(r)].n_failed();
        if (s.n_atoms == 0) {
            s.n_atoms = n_failed;
            s.outcomes.assign(static_cast<std::size_t>(n_r) * n_failed, 1);
        } else {
            s = append_failed_atoms(s, n_failed);
        }
        s = detection_forward_shots(s, em, derive_seed(seed, static_cast<std::uint64_t>(r), 2));
        for (int k = 0; k < n_r; ++k) values.push_back(s.n_atoms ? s.collective(k) : 0.0);
    }
    return values;
}

void check_bound(const SqueezingRecord& r, int n) {
    if (!r.collapsed && r.xi2 < squeezing_lower_bound(n) * (1.0 - 1e-9)) {
        throw NumericalError("squeezing parameter below 2/(2+N): numerical failure");
    }
}

double xi2_se(double xi2, double mean, double mean_se, double var, double var_se) {
    if (!std::isfinite(xi2) || mean == 0.0) return std::numeric_limits<double>::infinity();
    const double rv = var != 0.0 ? var_se / var : 0.0;
    const double rm = 2.0 * mean_se / mean;
    return std::abs(xi2) * std::sqrt(rv * rv + rm * rm);
}

}  // namespace

Series run_series(const RunConfig& cfg, const ScheduleBuilder& builder, const std::vector<double>& checkpoints,
                  const std::vector<double>& t_eff, const std::string& label) {
    cfg.errors.validate();
    if (checkpoints.size() != t_eff.size()) throw std::invalid_argument("run_series: label size mismatch");
    const ErrorModel& em = cfg.errors;
    const int n_imaged = cfg.lattice.n_atoms();
    const int n_real = em.eta > 0.0 ? std::max(1, cfg.realizations) : 1;
    const std::size_t n_t = checkpoints.size();

    std::vector<HoleRealization> holes(static_cast<std::size_t>(n_real));
    for (int r = 0; r < n_real; ++r) {
        ErrorModel e = em;
        e.seed = derive_seed(cfg.seed, 0x401e5ULL);
        holes[static_cast<std::size_t>(r)] = apply_stirap_holes(cfg.lattice, e, static_cast<std::uint64_t>(r));
    }

    const RealizationRun run{cfg, builder, checkpoints};
    std::vector<std::vector<RealizationMoments>> mom(n_t, std::vector<RealizationMoments>(static_cast<std::size_t>(n_real)));
    std::vector<StateVector> cached;
    const bool keep = cfg.shots > 0 && n_real == 1;
    parallel_for(n_real, cfg.workers, [&](int r) {
        const auto& hr = holes[static_cast<std::size_t>(r)];
        std::vector<StateVector> st = run.states(hr);
        for (std::size_t i = 0; i < n_t; ++i) mom[i][static_cast<std::size_t>(r)] = moments_of(st[i], hr.n_failed());
        if (keep) cached = std::move(st);
    });

    Series out;
    out.label = label;
    out.n_imaged = n_imaged;
    out.points.resize(n_t);
    for (std::size_t i = 0; i < n_t; ++i) {
        TimePoint& tp = out.points[i];
        tp.t_us = checkpoints[i];
        tp.t_eff_us = t_eff[i];
        const PooledReadout pooled(mom[i], n_imaged);
        const ReadoutOptimum ro = optimize_readout(pooled, em.rotation_bias_deg);
        tp.exact = SqueezingRecord::make(tp.t_us, n_imaged, ro.spin_length_mean, ro.theta, ro.min_var);

        const ReadoutMoments fv = detection_forward_moments(ro.mean_theta, ro.min_var, ro.mean_theta, n_imaged, em);
        tp.mean_theta_raw = fv.mean;
        tp.spin_length_raw = detection_forward_moments(ro.spin_length_mean, 0.0, 0.0, n_imaged, em).mean;
        tp.raw = SqueezingRecord::make(tp.t_us, n_imaged, tp.spin_length_raw, ro.theta, fv.var);
        const ReadoutMoments inv = detection_inverse(tp.spin_length_raw, fv.var, fv.mean, n_imaged, em);
        tp.corrected = SqueezingRecord::make(tp.t_us, n_imaged, inv.mean, ro.theta, inv.var);
        // Readouts that include failed atoms are not states of n_imaged spins; only
        // hole-free records and the interacting states themselves are held to the bound.
        if (em.eta == 0.0) {
            for (const SqueezingRecord* r : {&tp.exact, &tp.raw, &tp.corrected}) check_bound(*r, n_imaged);
        }
        for (const auto& rm : mom[i]) {
            if (rm.m.n_sites > 0) check_bound(squeezing_record(MomentSummary::from(rm.m), tp.t_us), rm.m.n_sites);
        }
    }

    if (cfg.shots > 0) {
        std::vector<std::vector<StateVector>> per_r;
        if (!keep) per_r.resize(static_cast<std::size_t>(n_real));
        // states are regenerated per realization to bound memory
        auto states_at = [&](std::size_t i) {
            std::vector<const StateVector*> ptrs;
            if (keep) {
                ptrs.push_back(&cached[i]);
            } else {
                for (auto& s : per_r) ptrs.push_back(&s[i]);
            }
            return ptrs;
        };
        if (!keep) {
            parallel_for(n_real, cfg.workers, [&](int r) { per_r[static_cast<std::size_t>(r)] = run.states(holes[static_cast<std::size_t>(r)]); });
        }
        for (std::size_t i = 0; i < n_t; ++i) {
            TimePoint& tp = out.points[i];
            const auto ptrs = states_at(i);
            const std::uint64_t base = derive_seed(cfg.seed, 0x5407ULL, i);
            const Pulse vp = biased(pulses::variance_readout(tp.exact.theta_star), em.rotation_bias_deg);
            const Pulse sp = biased(pulses::spin_length_readout(), em.rotation_bias_deg);
            const std::vector<double> vv = sampled_values(ptrs, holes, vp, cfg.shots, em, derive_seed(base, 1));
            const std::vector<double> sv = sampled_values(ptrs, holes, sp, cfg.shots, em, derive_seed(base, 2));
            const ShotStatistics vs = shot_statistics(vv, cfg.bootstrap, derive_seed(base, 3));
            const ShotStatistics ss = shot_statistics(sv, cfg.bootstrap, derive_seed(base, 4));
            tp.has_shots = true;
            tp.shot_mean = ss.mean;
            tp.shot_mean_se = ss.se_mean;
            tp.shot_var = vs.variance;
            tp.shot_var_se = vs.se_variance;
            tp.shot_mean_theta = vs.mean;
            tp.shot_raw = SqueezingRecord::make(tp.t_us, n_imaged, ss.mean, tp.exact.theta_star, vs.variance);
            const ReadoutMoments inv = detection_inverse(ss.mean, vs.variance, vs.mean, n_imaged, em);
            tp.shot_corrected = SqueezingRecord::make(tp.t_us, n_imaged, inv.mean, tp.exact.theta_star, inv.var);
            tp.shot_xi2_raw_se = xi2_se(tp.shot_raw.xi2, ss.mean, ss.se_mean, vs.variance, vs.se_variance);
            const double gm = 1.0 - em.eps_up - em.eps_down;
            const double gv = 1.0 - 2.0 * em.eps_up - 2.0 * em.eps_down;
            tp.shot_xi2_corrected_se =
                xi2_se(tp.shot_corrected.xi2, inv.mean, ss.se_mean / gm, inv.var, vs.se_variance / gv);
        }
    }
    return out;
}

Series simulate_quench(const RunConfig& cfg) {
    const std::vector<double> t = cfg.time.points();
    const double t_end = t.back();
    return run_series(
        cfg, [&](const HamiltonianSpec& h) { return standard_schedule(h, t_end); }, t, t, "quench");
}

namespace {

Series simulate_multistep_series(const RunConfig& cfg, const MultistepPlan& plan) {
    const std::vector<double> t = cfg.time.points();
    const double t_end = t.back();
    if (plan.t1_us >= t_end) throw ConfigError("multistep: the time grid must extend past t1");
    const PulseModel model = cfg.protocol.pulse;
    return run_series(
        cfg,
        [&](const HamiltonianSpec& h) {
            ProtocolSchedule s = multistep_schedule(h, plan.t1_us, plan.angle_rad, t_end - plan.t1_us, model);
            return s;
        },
        t, t, "multistep");
}

Series floquet_series(const RunConfig& cfg, double t_ins, int n) {
    const std::vector<double> tau = cfg.time.points();
    const double t_end = tau.back();
    if (t_ins > t_end) throw ConfigError("floquet: insertion time beyond the time grid");
    const double tF = cfg.protocol.t_F_us;
    std::vector<double> phys;
    for (double x : tau) phys.push_back(x <= t_ins ? x : x + n * tF);
    return run_series(
        cfg,
        [&](const HamiltonianSpec& h) {
            ProtocolSchedule s = standard_schedule(h, t_ins);
            const ProtocolSchedule cyc = wahuha_cycle(h, tF, cfg.protocol.pulse, cfg.protocol.spacing);
            for (int k = 0; k < n; ++k) s.append(cyc);
            s.append(standard_schedule(h, t_end - t_ins));
            return s;
        },
        phys, tau, "floquet n=" + std::to_string(n));
}

}  // namespace

std::vector<Series> simulate(const RunConfig& cfg) {
    switch (cfg.protocol.kind) {
        case ProtocolKind::quench: return {simulate_quench(cfg)};
        case ProtocolKind::multistep: return {simulate_multistep_series(cfg, plan_multistep(cfg))};
        case ProtocolKind::floquet: {
            std::vector<Series> out;
            for (auto& r : floquet_experiment(cfg, cfg.protocol.n_cycles).runs) out.push_back(std::move(r.series));
            return out;
        }
    }
    throw ConfigError("unknown protocol kind");
}

// -------------------------------------------------------------- experiments --

std::vector<double> theta_grid(int n) {
    if (n < 4) throw ConfigError("theta grid: need at least 4 angles");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = -0.5 * pi + pi * (i + 1) / n;
    return g;
}

ThetaScanResult theta_scan(const RunConfig& cfg, double t_us, const std::vector<double>& thetas) {
    cfg.errors.validate();
    if (thetas.size() < 4) throw ConfigError("theta scan: need at least 4 angles");
    if (cfg.shots == 1) throw ConfigError("theta scan: need at least 2 shots per angle");
    const ErrorModel& em = cfg.errors;
    const int n_real = em.eta > 0.0 ? std::max(1, cfg.realizations) : 1;
    std::vector<HoleRealization> holes(static_cast<std::size_t>(n_real));
    for (int r = 0; r < n_real; ++r) {
        ErrorModel e = em;
        e.seed = derive_seed(cfg.seed, 0x401e5ULL);
        holes[static_cast<std::size_t>(r)] = apply_stirap_holes(cfg.lattice, e, static_cast<std::uint64_t>(r));
    }
    const std::vector<double> cps{t_us};
    const ScheduleBuilder builder = [&](const HamiltonianSpec& h) { return standard_schedule(h, t_us); };
    const RealizationRun run{cfg, builder, cps};
    std::vector<StateVector> states(static_cast<std::size_t>(n_real));
    std::vector<RealizationMoments> mom(static_cast<std::size_t>(n_real));
    parallel_for(n_real, cfg.workers, [&](int r) {
        auto st = run.states(holes[static_cast<std::size_t>(r)]);
        states[static_cast<std::size_t>(r)] = std::move(st.front());
        mom[static_cast<std::size_t>(r)] = moments_of(states[static_cast<std::size_t>(r)], holes[static_cast<std::size_t>(r)].n_failed());
    });
    const PooledReadout pooled(mom, cfg.lattice.n_atoms());
    const ReadoutOptimum ro = optimize_readout(pooled, em.rotation_bias_deg);

    ThetaScanResult res;
    res.n_imaged = cfg.lattice.n_atoms();
    res.t_us = t_us;
    res.exact_theta_star = ro.theta;
    res.exact_min_var = ro.min_var;
    std::vector<const StateVector*> ptrs;
    for (const auto& s : states) ptrs.push_back(&s);
    std::vector<double> th, var, se;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        ThetaScanRow row;
        row.theta = thetas[i];
        const Pulse p = biased(pulses::variance_readout(row.theta), em.rotation_bias_deg);
        row.exact_var = pooled.var(readout_axis(p));
        if (cfg.shots > 0) {
            const std::uint64_t base = derive_seed(cfg.seed, 0x7e7aULL, i);
            const std::vector<double> v = sampled_values(ptrs, holes, p, cfg.shots, em, base);
            const ShotStatistics st = shot_statistics(v, cfg.bootstrap, derive_seed(base, 9));
            row.var = st.variance;
            row.var_se = st.se_variance;
        } else {
            row.var = row.exact_var;
        }
        res.rows.push_back(row);
        th.push_back(row.theta);
        var.push_back(row.var);
        se.push_back(row.var_se);
    }
    res.fit = fit_sinusoid(th, var, se);
    return res;
}

ScalingResult scaling_sweep(const RunConfig& cfg, const std::vector<std::pair<int, int>>& sizes) {
    if (sizes.size() < 3) throw ConfigError("scaling: need at least 3 sizes");
    std::vector<ScalingEntry> entries;
    for (const auto& [rows, cols] : sizes) {
        RunConfig c = cfg;
        c.lattice.rows = rows;
        c.lattice.cols = cols;
        c.lattice.holes.clear();
        ScalingEntry e;
        e.label = std::to_string(rows) + "x" + std::to_string(cols);
        e.n_atoms = c.lattice.n_atoms();
        try {
            c.validate();
            const Series s = simulate_quench(c);
            e.raw = extract_optimum(s.best_raw_records(), c.half_window);
            e.corrected = extract_optimum(s.best_corrected_records(), c.half_window);
        } catch (const NumericalError& err) {
            e.ok = false;
            e.error = err.what();
        }
        entries.push_back(e);
    }
    return fit_scaling(std::move(entries));
}

ScalingResult oat_scaling(const std::vector<int>& sizes, double J_MHz, std::optional<double> chi_MHz) {
    if (sizes.size() < 3) throw ConfigError("oat scaling: need at least 3 sizes");
    std::vector<ScalingEntry> entries;
    for (int n : sizes) {
        ScalingEntry e;
        e.label = "N=" + std::to_string(n);
        e.n_atoms = n;
        const double chi = chi_MHz ? *chi_MHz : oat_kac_chi(n, J_MHz);
        const OatOptimum o = oat_optimum(n, chi);
        e.raw = {o.t_us, o.xi2, 10.0 * std::log10(o.xi2), false, 0};
        e.corrected = e.raw;
        entries.push_back(e);
    }
    return fit_scaling(std::move(entries));
}

FloquetResult floquet_experiment(const RunConfig& cfg, const std::vector<int>& n_cycles) {
    if (n_cycles.empty()) throw ConfigError("floquet: no cycle counts given");
    for (int n : n_cycles) {
        if (n < 0) throw ConfigError("floquet: cycle counts must be >= 0");
    }
    FloquetResult res;
    const std::vector<double> tau = cfg.time.points();
    Series base = simulate_quench(cfg);
    base.label = "floquet n=0";
    if (cfg.protocol.insert_at_us) {
        res.t_insert_us = *cfg.protocol.insert_at_us;
    } else {
        res.t_insert_us = extract_optimum(base.exact_records(), cfg.half_window).t_us;
    }
    for (int n : n_cycles) {
        FloquetRun run;
        run.n_cycles = n;
        run.series = n == 0 ? base : floquet_series(cfg, res.t_insert_us, n);
        std::vector<double> t, x;
        for (const auto& p : run.series.points) {
            t.push_back(p.t_us);
            x.push_back(p.exact.xi2);
        }
        run.sub_sql = sub_level_duration(t, x, 1.0);
        res.runs.push_back(std::move(run));
    }
    return res;
}

double floquet_cycle_deviation(const HamiltonianSpec& xy, const StateVector& v, double t_F_us,
                               const PulseModel& model, const WahuhaSpacing& spacing, const KrylovParams& kp) {
    if (xy.kind != HamiltonianKind::XY) throw ConfigError("floquet deviation: expects an XY Hamiltonian");
    const StateVector driven = run_to_end(wahuha_cycle(xy, t_F_us, model, spacing), v, kp);
    const StateVector target = evolve(HamiltonianSpec::heisenberg(xy.cm, 0.5 * xy.J_MHz), v, t_F_us, kp);
    return std::max(0.0, 1.0 - fidelity(driven, target));
}

MultistepPlan plan_multistep(const RunConfig& cfg) {
    const ProtocolConfig& pc = cfg.protocol;
    const double chi = moment_of_inertia(coupling_matrix(cfg.lattice), cfg.J_MHz);
    const double rate = 2.0 * pi * chi * cfg.lattice.n_atoms();
    MultistepPlan plan;
    if (pc.t1_us > 0.0) {
        plan.t1_us = pc.t1_us;
    } else {
        LatticeSpec ref{pc.ref_rows, pc.ref_cols, cfg.lattice.spacing_um, cfg.lattice.boundary, {}};
        const double chi_ref = moment_of_inertia(coupling_matrix(ref), cfg.J_MHz);
        plan.t1_us = pc.t1_ref_us * chi_ref * ref.n_atoms() / (chi * cfg.lattice.n_atoms());
    }
    plan.shear = rate * plan.t1_us;
    // the quantum shear is x -> x - shear z
    plan.angle_rad = pc.angle_rad ? *pc.angle_rad : shear_alignment_angle(-plan.shear);
    return plan;
}

MultistepResult multistep_experiment(const RunConfig& cfg) {
    MultistepResult res;
    res.plan = plan_multistep(cfg);
    res.single = simulate_quench(cfg);
    res.single.label = "single-step";
    res.multi = simulate_multistep_series(cfg, res.plan);
    return res;
}

}  // namespace spinsq
