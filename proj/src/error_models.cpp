#include "spinsq/error_models.hpp"

#include <cmath>
#include <string>

#include "spinsq/errors.hpp"
#include "spinsq/rng.hpp"

namespace spinsq {

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError(std::string("error model: ") + name + " must lie in [0, 1)");
}

}  // namespace

void ErrorModel::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("error model: eta must lie in [0, 1]");
    check_probability(eps_up, "eps_up");
    check_probability(eps_down, "eps_down");
    if (eps_up + eps_down >= 0.5) throw ConfigError("error model: eps_up + eps_down must be below 1/2");
    if (!std::isfinite(rotation_bias_deg)) throw ConfigError("error model: rotation_bias_deg must be finite");
}

HoleRealization apply_stirap_holes(const LatticeSpec& spec, const ErrorModel& em, std::uint64_t index) {
    spec.validate();
    em.validate();
    HoleRealization r;
    r.lattice = spec;
    r.n_imaged = spec.n_atoms();
    if (em.eta == 0.0) return r;
    CounterRng rng = CounterRng(em.seed, 0x5717a9ULL).split(index);
    for (int s = 0; s < spec.n_grid(); ++s) {
        if (spec.holes.count(s)) continue;
        if (rng.uniform() < em.eta) r.failed.push_back(s);
    }
    for (int s : r.failed) r.lattice.holes.insert(s);
    return r;
}

ShotSet append_failed_atoms(const ShotSet& shots, int n_failed) {
    if (n_failed == 0) return shots;
    ShotSet out = shots;
    const int n_old = shots.n_atoms;
    out.n_atoms = n_old + n_failed;
    out.outcomes.assign(static_cast<std::size_t>(shots.n_shots()) * out.n_atoms, 1);
    for (int k = 0; k < shots.n_shots(); ++k) {
        for (int i = 0; i < n_old; ++i) {
            out.outcomes[static_cast<std::size_t>(k) * out.n_atoms + i] = static_cast<std::int8_t>(shots.at(k, i));
        }
    }
    return out;
}

ShotSet detection_forward_shots(const ShotSet& shots, const ErrorModel& em, std::uint64_t seed) {
    em.validate();
    ShotSet out = shots;
    if (!em.has_detection_errors()) return out;
    const CounterRng root(seed, 0xde7ec7ULL);
    for (int k = 0; k < shots.n_shots(); ++k) {
        CounterRng rng = root.split(static_cast<std::uint64_t>(k));
        for (int i = 0; i < shots.n_atoms; ++i) {
            auto& s = out.outcomes[static_cast<std::size_t>(k) * shots.n_atoms + i];
            const double u = rng.uniform();
            if (s > 0 ? u < em.eps_up : u < em.eps_down) s = static_cast<std::int8_t>(-s);
        }
    }
    return out;
}

ReadoutMoments detection_forward_moments(double mean_tilde, double var_tilde, double mean_theta_tilde,
                                         int n_atoms, const ErrorModel& em) {
    const double half = 0.5 * n_atoms;
    const double eu = em.eps_up;
    const double ed = em.eps_down;
    ReadoutMoments m;
    m.mean = half * (ed - eu) + (1.0 - ed - eu) * mean_tilde;
    m.var = (1.0 - 2.0 * ed - 2.0 * eu) * var_tilde + ed * (half - mean_theta_tilde) +
            eu * (half + mean_theta_tilde);
    return m;
}

double detection_inverse_mean(double mean, int n_atoms, const ErrorModel& em) {
    const double gain = 1.0 - em.eps_down - em.eps_up;
    if (gain <= 0.0) throw NumericalError("detection inverse: 1 - eps_up - eps_down must be positive");
    return (mean - 0.5 * n_atoms * (em.eps_down - em.eps_up)) / gain;
}

ReadoutMoments detection_inverse(double mean, double var, double mean_theta, int n_atoms,
                                 const ErrorModel& em, InverseMode mode) {
    const double var_gain = 1.0 - 2.0 * em.eps_down - 2.0 * em.eps_up;
    if (var_gain <= 0.0) throw NumericalError("detection inverse: 1 - 2 eps_up - 2 eps_down must be positive");
    const double half = 0.5 * n_atoms;
    const double theta_tilde =
        mode == InverseMode::exact ? detection_inverse_mean(mean_theta, n_atoms, em) : 0.0;
    ReadoutMoments m;
    m.mean = detection_inverse_mean(mean, n_atoms, em);
    m.var = (var - em.eps_down * (half - theta_tilde) - em.eps_up * (half + theta_tilde)) / var_gain;
    return m;
}

}  // namespace spinsq
