#include "spinsq/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinsq/errors.hpp"

namespace spinsq {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double time_eps = 1e-12;

// Gaussian envelopes are truncated at +-4 sigma.
constexpr double gauss_cut = 4.0;

double sigma_us(const PulseModel& m) { return m.half_width_ns * 1e-3; }

double gauss_norm() { return std::sqrt(2.0 * std::numbers::pi) * std::erf(gauss_cut / std::numbers::sqrt2); }

}  // namespace

PulseModel PulseModel::square(double rabi_MHz, bool interactions_on) {
    PulseModel m;
    m.finite = true;
    m.shape = PulseShape::square;
    m.rabi_MHz = rabi_MHz;
    m.interactions_on = interactions_on;
    return m;
}

PulseModel PulseModel::gaussian(double half_width_ns, bool interactions_on) {
    PulseModel m;
    m.finite = true;
    m.shape = PulseShape::gaussian;
    m.half_width_ns = half_width_ns;
    m.interactions_on = interactions_on;
    return m;
}

double Pulse::duration_us() const {
    if (!model.finite) return 0.0;
    if (model.shape == PulseShape::square) {
        if (!(model.rabi_MHz > 0.0)) throw ConfigError("pulse: rabi_MHz must be > 0");
        return std::abs(angle) / (two_pi * model.rabi_MHz);
    }
    if (!(model.half_width_ns > 0.0)) throw ConfigError("pulse: half_width_ns must be > 0");
    return 2.0 * gauss_cut * sigma_us(model);
}

double Pulse::rabi_at(double t_us) const {
    if (!model.finite) return 0.0;
    if (model.shape == PulseShape::square) return angle >= 0.0 ? model.rabi_MHz : -model.rabi_MHz;
    const double s = sigma_us(model);
    const double peak = angle / (two_pi * s * gauss_norm());
    const double x = (t_us - gauss_cut * s) / s;
    return peak * std::exp(-0.5 * x * x);
}

double Pulse::area_until(double t_us) const {
    if (!model.finite) return angle;
    const double dur = duration_us();
    t_us = std::clamp(t_us, 0.0, dur);
    if (model.shape == PulseShape::square) return two_pi * rabi_at(0.0) * t_us;
    const double s = sigma_us(model);
    const double x = (t_us - gauss_cut * s) / (s * std::numbers::sqrt2);
    const double erf_cut = std::erf(gauss_cut / std::numbers::sqrt2);
    return angle * (std::erf(x) + erf_cut) / (2.0 * erf_cut);
}

namespace {

double step_duration(const Step& st) {
    if (const auto* p = std::get_if<Pulse>(&st)) return p->duration_us();
    return std::get<FreeEvolution>(st).t_us;
}

}  // namespace

double ProtocolSchedule::duration_us() const {
    double t = 0.0;
    for (const Step& st : steps) t += step_duration(st);
    return t;
}

void ProtocolSchedule::append(const ProtocolSchedule& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
    if (other.readout) readout = other.readout;
}

namespace pulses {

Pulse preparation(const PulseModel& model) { return {std::numbers::pi, std::numbers::pi / 2, model}; }

Pulse spin_length_readout(const PulseModel& model) { return preparation(model); }

Pulse variance_readout(double theta, const PulseModel& model) {
    return {std::numbers::pi / 2, -theta, model};
}

}  // namespace pulses

StateVector prepare_coherent_y(int n_sites) {
    if (n_sites < 1) throw ConfigError("prepare_coherent_y: need at least one site");
    StateVector v(n_sites);
    const double amp = std::pow(2.0, -0.5 * n_sites);
    static const cplx phase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^k
    for (std::size_t s = 0; s < v.dim(); ++s) {
        const int n_down = n_sites - std::popcount(s);
        v[s] = amp * phase[n_down & 3];
    }
    return v;
}

StateVector apply_pulse_segment(const Pulse& p, const StateVector& v, const HamiltonianSpec* h,
                                double from_us, double to_us, const KrylovParams& kp) {
    const auto axis = in_plane_axis(p.phase);
    if (!p.model.finite) {
        StateVector out = v;
        rotate_global(out, axis, p.angle);
        return out;
    }
    const double dur = p.duration_us();
    from_us = std::clamp(from_us, 0.0, dur);
    to_us = std::clamp(to_us, 0.0, dur);
    if (to_us <= from_us) return v;

    if (!p.model.interactions_on) {
        // The drive alone commutes with itself at all times: only the area matters.
        StateVector out = v;
        rotate_global(out, axis, p.area_until(to_us) - p.area_until(from_us));
        return out;
    }
    if (h == nullptr) throw ConfigError("pulse: finite pulse with interactions needs a Hamiltonian");

    Hamiltonian ham(*h);
    if (ham.n_sites() != v.n_sites()) throw std::invalid_argument("pulse: dimension mismatch");
    StateVector out = v;
    if (p.model.shape == PulseShape::square) {
        ham.set_drive(p.rabi_at(0.0), p.phase);
        return evolve(ham, out, to_us - from_us, kp);
    }
    const double span = to_us - from_us;
    const int n_sub = std::max(1, static_cast<int>(std::ceil(span / p.model.max_substep_us - 1e-9)));
    const double dt = span / n_sub;
    for (int k = 0; k < n_sub; ++k) {
        const double t0 = from_us + k * dt;
        // Rabi frequency chosen so the substep carries the exact envelope area.
        const double area = p.area_until(t0 + dt) - p.area_until(t0);
        ham.set_drive(area / (two_pi * dt), p.phase);
        out = evolve(ham, out, dt, kp);
    }
    return out;
}

StateVector apply_pulse(const Pulse& p, const StateVector& v, const HamiltonianSpec* h,
                        const KrylovParams& kp) {
    return apply_pulse_segment(p, v, h, 0.0, p.duration_us(), kp);
}

namespace {

// Interaction Hamiltonian active during a pulse: the one of the nearest free
// evolution segment in the schedule.
const HamiltonianSpec* pulse_context(const ProtocolSchedule& s, std::size_t idx) {
    for (std::size_t d = 1; d <= s.steps.size(); ++d) {
        if (idx + d < s.steps.size()) {
            if (const auto* f = std::get_if<FreeEvolution>(&s.steps[idx + d])) return &f->h;
        }
        if (idx >= d) {
            if (const auto* f = std::get_if<FreeEvolution>(&s.steps[idx - d])) return &f->h;
        }
    }
    return nullptr;
}

StateVector advance(const ProtocolSchedule& s, std::size_t idx, const StateVector& v, double from,
                    double to, const KrylovParams& kp) {
    const Step& st = s.steps[idx];
    if (const auto* p = std::get_if<Pulse>(&st)) {
        return apply_pulse_segment(*p, v, pulse_context(s, idx), from, to, kp);
    }
    const auto& f = std::get<FreeEvolution>(st);
    return evolve(f.h, v, to - from, kp);
}

}  // namespace

std::vector<StateVector> run_schedule(const ProtocolSchedule& s, const StateVector& v0,
                                      const std::vector<double>& checkpoints, const KrylovParams& kp) {
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw ConfigError("run_schedule: checkpoints must be sorted");
    }
    const double total = s.duration_us();
    if (!checkpoints.empty() && (checkpoints.front() < -time_eps || checkpoints.back() > total + time_eps)) {
        std::ostringstream msg;
        msg << "run_schedule: checkpoint outside [0, " << total << "] us";
        throw ConfigError(msg.str());
    }

    std::vector<StateVector> out;
    out.reserve(checkpoints.size());
    std::size_t next = 0;
    double t = 0.0;
    StateVector cur = v0;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const double d = step_duration(s.steps[i]);
        if (d <= 0.0) {
            if (std::holds_alternative<Pulse>(s.steps[i])) cur = advance(s, i, cur, 0.0, 0.0, kp);
            continue;
        }
        while (next < checkpoints.size() && checkpoints[next] <= t + time_eps) out.push_back(cur), ++next;
        double local = 0.0;
        while (next < checkpoints.size() && checkpoints[next] < t + d - time_eps) {
            const double target = checkpoints[next] - t;
            cur = advance(s, i, cur, local, target, kp);
            local = target;
            out.push_back(cur);
            ++next;
        }
        cur = advance(s, i, cur, local, d, kp);
        t += d;
    }
    while (next < checkpoints.size()) out.push_back(cur), ++next;
    return out;
}

StateVector run_to_end(const ProtocolSchedule& s, const StateVector& v0, const KrylovParams& kp) {
    return std::move(run_schedule(s, v0, {s.duration_us()}, kp).front());
}

ProtocolSchedule wahuha_cycle(const HamiltonianSpec& h, double t_F_us, const PulseModel& model,
                              const WahuhaSpacing& spacing) {
    if (!(t_F_us > 0.0)) throw ConfigError("wahuha: t_F must be > 0");
    double fsum = 0.0;
    for (double f : spacing.fractions) {
        if (f < 0.0) throw ConfigError("wahuha: negative delay fraction");
        fsum += f;
    }
    if (std::abs(fsum - 1.0) > 1e-9) throw ConfigError("wahuha: delay fractions must sum to 1");

    const double q = std::numbers::pi / 2;
    const std::array<Pulse, 4> ps = {Pulse{0.0, q, model}, Pulse{q, q, model},
                                     Pulse{-q, q, model}, Pulse{std::numbers::pi, q, model}};
    ProtocolSchedule out;
    for (std::size_t k = 0; k < 5; ++k) {
        double delay = spacing.fractions[k] * t_F_us;
        if (k > 0) delay -= 0.5 * ps[k - 1].duration_us();
        if (k < 4) delay -= 0.5 * ps[k].duration_us();
        if (delay < -1e-12) {
            throw ConfigError("wahuha: pulse durations exceed the cycle time");
        }
        out.steps.push_back(FreeEvolution{h, std::max(delay, 0.0)});
        if (k < 4) out.steps.push_back(ps[k]);
    }
    return out;
}

ProtocolSchedule standard_schedule(const HamiltonianSpec& h, double t_us) {
    ProtocolSchedule s;
    s.steps.push_back(FreeEvolution{h, t_us});
    return s;
}

ProtocolSchedule multistep_schedule(const HamiltonianSpec& h, double t1_us, double angle,
                                    double t2_us, const PulseModel& model) {
    ProtocolSchedule s;
    s.steps.push_back(FreeEvolution{h, t1_us});
    s.steps.push_back(Pulse{std::numbers::pi / 2, angle, model});
    s.steps.push_back(FreeEvolution{h, t2_us});
    return s;
}

}  // namespace spinsq
