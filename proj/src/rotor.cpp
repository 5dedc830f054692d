#include "spinsq/rotor.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spinsq/errors.hpp"

namespace spinsq {

DickeState::DickeState(int n_atoms, std::vector<cplx> amplitudes) : n_(n_atoms), amps_(std::move(amplitudes)) {
    if (n_atoms < 1) throw ConfigError("DickeState: need N >= 1");
    if (amps_.size() != static_cast<std::size_t>(n_atoms) + 1) {
        throw std::invalid_argument("DickeState: expected N + 1 amplitudes");
    }
}

DickeState DickeState::coherent_y(int n_atoms) {
    if (n_atoms < 1) throw ConfigError("DickeState: need N >= 1");
    std::vector<cplx> a(static_cast<std::size_t>(n_atoms) + 1);
    const cplx phase[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    for (int up = 0; up <= n_atoms; ++up) {
        const double log_binom = std::lgamma(n_atoms + 1.0) - std::lgamma(up + 1.0) - std::lgamma(n_atoms - up + 1.0);
        const double mag = std::exp(0.5 * log_binom - 0.5 * n_atoms * std::numbers::ln2);
        a[static_cast<std::size_t>(up)] = mag * phase[(n_atoms - up) % 4];
    }
    return DickeState(n_atoms, std::move(a));
}

DickeState DickeState::dicke(int n_atoms, double m) {
    const double a = m + 0.5 * n_atoms;
    const long idx = std::lround(a);
    if (std::abs(a - idx) > 1e-9 || idx < 0 || idx > n_atoms) throw ConfigError("DickeState: invalid m");
    std::vector<cplx> amps(static_cast<std::size_t>(n_atoms) + 1, 0.0);
    amps[static_cast<std::size_t>(idx)] = 1.0;
    return DickeState(n_atoms, std::move(amps));
}

double DickeState::norm() const {
    double s = 0.0;
    for (const cplx& c : amps_) s += std::norm(c);
    return std::sqrt(s);
}

DickeState oat_evolve(const DickeState& d, double chi_MHz, double t_us) {
    DickeState out = d;
    const double w = 2.0 * std::numbers::pi * chi_MHz * t_us;
    for (int a = 0; a <= d.n_atoms(); ++a) {
        const double m = d.m_at(a);
        // reduce m^2 w mod 2 pi before exponentiating to keep long times accurate
        const double ph = std::remainder(m * m * w, 2.0 * std::numbers::pi);
        out.amplitudes()[static_cast<std::size_t>(a)] *= std::polar(1.0, -ph);
    }
    return out;
}

CollectiveMoments dicke_moments(const DickeState& d) {
    const int n = d.n_atoms();
    const double j = 0.5 * n;
    const auto& c = d.amplitudes();
    double p_total = 0.0;
    double z1 = 0.0, z2 = 0.0;
    cplx jp = 0.0, jp2 = 0.0, jpz = 0.0;  // <J+>, <J+^2>, <J+ (2Jz + 1)>/2 folded below
    for (int a = 0; a <= n; ++a) {
        const double m = d.m_at(a);
        const double p = std::norm(c[static_cast<std::size_t>(a)]);
        p_total += p;
        z1 += p * m;
        z2 += p * m * m;
        if (a + 1 <= n) {
            const double l1 = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
            const cplx t = std::conj(c[static_cast<std::size_t>(a) + 1]) * c[static_cast<std::size_t>(a)] * l1;
            jp += t;
            jpz += t * (m + 0.5);
            if (a + 2 <= n) {
                const double l2 = std::sqrt(j * (j + 1.0) - (m + 1.0) * (m + 2.0));
                jp2 += std::conj(c[static_cast<std::size_t>(a) + 2]) * c[static_cast<std::size_t>(a)] * l1 * l2;
            }
        }
    }
    if (std::abs(std::sqrt(p_total) - 1.0) > 1e-10) throw std::invalid_argument("dicke_moments: state not normalized");

    CollectiveMoments mo;
    mo.n_sites = n;
    mo.mean = {jp.real(), jp.imag(), z1};
    const double perp = j * (j + 1.0) - z2;
    auto& s = mo.second;
    s[0][0] = 0.5 * (perp + jp2.real());
    s[1][1] = 0.5 * (perp - jp2.real());
    s[2][2] = z2;
    s[0][1] = s[1][0] = 0.5 * jp2.imag();
    s[0][2] = s[2][0] = jpz.real();
    s[1][2] = s[2][1] = jpz.imag();
    return mo;
}

StateVector to_state_vector(const DickeState& d) {
    const int n = d.n_atoms();
    if (n > 20) throw ConfigError("to_state_vector: N too large for the full register");
    StateVector v(n);
    for (std::size_t s = 0; s < v.dim(); ++s) {
        const int up = std::popcount(s);
        const double log_binom = std::lgamma(n + 1.0) - std::lgamma(up + 1.0) - std::lgamma(n - up + 1.0);
        v[s] = d.amplitudes()[static_cast<std::size_t>(up)] * std::exp(-0.5 * log_binom);
    }
    return v;
}

std::vector<SqueezingRecord> oat_squeezing_curve(int n_atoms, double chi_MHz, const std::vector<double>& t_grid) {
    const DickeState d0 = DickeState::coherent_y(n_atoms);
    std::vector<SqueezingRecord> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        out.push_back(squeezing_record(MomentSummary::from(dicke_moments(oat_evolve(d0, chi_MHz, t))), t));
    }
    return out;
}

double rotor_magnetization(int n_atoms, double chi_MHz, double t_us) {
    return dicke_moments(oat_evolve(DickeState::coherent_y(n_atoms), chi_MHz, t_us)).mean[1];
}

OatOptimum oat_optimum(int n_atoms, double chi_MHz) {
    if (n_atoms < 2) throw ConfigError("oat_optimum: need N >= 2");
    if (!(chi_MHz > 0.0)) throw ConfigError("oat_optimum: chi must be positive");
    const DickeState d0 = DickeState::coherent_y(n_atoms);
    auto xi2 = [&](double t) {
        const SqueezingRecord r = squeezing_record(MomentSummary::from(dicke_moments(oat_evolve(d0, chi_MHz, t))), t);
        return r.collapsed ? std::numeric_limits<double>::infinity() : r.xi2;
    };
    const double t_max = 0.5 * oat_revival_time(chi_MHz);
    const int n_grid = 4000;
    const double dt = t_max / n_grid;
    int best = 1;
    double best_val = xi2(dt);
    for (int i = 2; i < n_grid; ++i) {
        const double v = xi2(i * dt);
        if (v < best_val) best_val = v, best = i;
    }
    double a = (best - 1) * dt, b = (best + 1) * dt;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = xi2(x1), f2 = xi2(x2);
    for (int it = 0; it < 100 && b - a > 1e-14 * t_max; ++it) {
        if (f1 < f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - g * (b - a);
            f1 = xi2(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + g * (b - a);
            f2 = xi2(x2);
        }
    }
    OatOptimum o;
    o.t_us = f1 < f2 ? x1 : x2;
    o.xi2 = std::min(f1, f2);
    if (best_val < o.xi2) o = {best * dt, best_val};
    return o;
}

double oat_kac_chi(int n_atoms, double J_MHz) {
    if (n_atoms < 2) throw ConfigError("oat_kac_chi: need N >= 2");
    // sum over nonzero integer vectors of |r|^-3 on the square lattice
    constexpr double lattice_sum = 9.0336217;
    return J_MHz * lattice_sum / n_atoms;
}

}  // namespace spinsq
