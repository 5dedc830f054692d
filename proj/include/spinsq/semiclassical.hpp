#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <vector>

namespace spinsq {

/// Cloud of classical spin fluctuations (x, z) on the tangent plane of the
/// Bloch sphere at +y, in units of the collective spin.
struct ClassicalEnsemble {
    int n_atoms = 0;
    double m_xy = 1.0;        ///< effective in-plane spin-length fraction
    double J_tilde_MHz = 0.0; ///< effective twisting rate, 2 pi included
    std::vector<std::array<double, 2>> points;

    /// n_points i.i.d. Gaussian points with Var(x) = Var(z) = N/4. Point p
    /// depends only on (seed, p).
    static ClassicalEnsemble gaussian(int n_atoms, int n_points, double J_tilde_MHz, double m_xy,
                                      std::uint64_t seed);

    int n_points() const { return static_cast<int>(points.size()); }
};

/// Default twisting rate matching OAT with rate chi at short times: the
/// quantum shear is x -> x - 2 pi chi N t z.
inline double sc_default_J_tilde(int n_atoms, double chi_MHz) {
    return -2.0 * std::numbers::pi * n_atoms * chi_MHz;
}

/// x -> x + N m_xy sin(J~ z t / N), z fixed.
ClassicalEnsemble sc_evolve(const ClassicalEnsemble& e, double t_us);

/// Rigid rotation of the (x, z) plane: (x, z) -> (x cos a + z sin a, -x sin a + z cos a),
/// the same sense as a quantum rotation by `angle` about +y.
ClassicalEnsemble sc_rotate(const ClassicalEnsemble& e, double angle);

struct ScSqueezing {
    double theta_star = 0.0;
    double min_var = 0.0;
    double xi2_proxy = 0.0;  ///< min_var / (N/4); mean-spin shortening not modelled
    bool degenerate = false;
    double var_x = 0.0;
    double var_z = 0.0;
    double cov_xz = 0.0;
};

/// Sample covariance of the cloud, then the same minor-axis formula as the
/// quantum pipeline. Throws ConfigError for fewer than 100 points.
ScSqueezing sc_squeezing(const ClassicalEnsemble& e);

/// Rotation angle (for sc_rotate or a y pulse) that lays the major axis of a
/// noise ellipse with the given moments along x.
double major_axis_angle(double var_z, double var_x, double cov_xz);

/// Same for the linear shear x -> x + c z of an isotropic cloud.
double shear_alignment_angle(double shear);

/// CSV "x,z" of the cloud.
void write_points_csv(std::ostream& out, const ClassicalEnsemble& e);

}  // namespace spinsq
