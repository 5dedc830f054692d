#include "spinsq/semiclassical.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "spinsq/errors.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/rng.hpp"

namespace spinsq {

ClassicalEnsemble ClassicalEnsemble::gaussian(int n_atoms, int n_points, double J_tilde_MHz, double m_xy,
                                              std::uint64_t seed) {
    if (n_atoms < 1) throw ConfigError("classical ensemble: need N >= 1");
    if (n_points < 1) throw ConfigError("classical ensemble: need at least one point");
    if (!(m_xy > 0.0 && m_xy <= 1.0)) throw ConfigError("classical ensemble: m_xy must lie in (0, 1]");
    ClassicalEnsemble e;
    e.n_atoms = n_atoms;
    e.m_xy = m_xy;
    e.J_tilde_MHz = J_tilde_MHz;
    e.points.resize(static_cast<std::size_t>(n_points));
    const double sd = 0.5 * std::sqrt(static_cast<double>(n_atoms));
    const CounterRng root(seed, 0x5c1a55ULL);
    for (int p = 0; p < n_points; ++p) {
        CounterRng rng = root.split(static_cast<std::uint64_t>(p));
        // Box-Muller; 1 - u keeps the log argument in (0, 1]
        const double r = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        e.points[static_cast<std::size_t>(p)] = {sd * r * std::cos(phi), sd * r * std::sin(phi)};
    }
    return e;
}

ClassicalEnsemble sc_evolve(const ClassicalEnsemble& e, double t_us) {
    ClassicalEnsemble out = e;
    const double n = e.n_atoms;
    for (auto& p : out.points) p[0] += n * e.m_xy * std::sin(e.J_tilde_MHz * p[1] * t_us / n);
    return out;
}

ClassicalEnsemble sc_rotate(const ClassicalEnsemble& e, double angle) {
    ClassicalEnsemble out = e;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (auto& p : out.points) {
        const double x = p[0];
        const double z = p[1];
        p = {x * c + z * s, -x * s + z * c};
    }
    return out;
}

ScSqueezing sc_squeezing(const ClassicalEnsemble& e) {
    if (e.n_points() < 100) throw ConfigError("sc_squeezing: need at least 100 points");
    double mx = 0.0, mz = 0.0;
    for (const auto& p : e.points) mx += p[0], mz += p[1];
    const double n = e.n_points();
    mx /= n;
    mz /= n;
    double sxx = 0.0, szz = 0.0, sxz = 0.0;
    for (const auto& p : e.points) {
        const double dx = p[0] - mx;
        const double dz = p[1] - mz;
        sxx += dx * dx;
        szz += dz * dz;
        sxz += dx * dz;
    }
    ScSqueezing out;
    out.var_x = sxx / (n - 1.0);
    out.var_z = szz / (n - 1.0);
    out.cov_xz = sxz / (n - 1.0);
    const ThetaStar ts = theta_star(out.var_z, out.var_x, out.cov_xz);
    out.theta_star = ts.theta;
    out.min_var = ts.min_var;
    out.degenerate = ts.degenerate;
    out.xi2_proxy = ts.min_var / (0.25 * e.n_atoms);
    return out;
}

double major_axis_angle(double var_z, double var_x, double cov_xz) {
    return 0.5 * std::atan2(2.0 * cov_xz, var_x - var_z);
}

double shear_alignment_angle(double shear) {
    // x' = x + c z on a unit isotropic cloud: var_x = 1 + c^2, var_z = 1, cov = c
    return major_axis_angle(1.0, 1.0 + shear * shear, shear);
}

void write_points_csv(std::ostream& out, const ClassicalEnsemble& e) {
    out << "x,z\n";
    out.precision(10);
    for (const auto& p : e.points) out << p[0] << ',' << p[1] << '\n';
}

}  // namespace spinsq
