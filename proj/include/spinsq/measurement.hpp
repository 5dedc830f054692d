#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "spinsq/operators.hpp"
#include "spinsq/protocol.hpp"
#include "spinsq/state.hpp"

namespace spinsq {

/// First and second moments of the collective spin in the plane transverse
/// to the mean spin (along y).
struct MomentSummary {
    int n_atoms = 0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double mean_z = 0.0;
    double var_x = 0.0;
    double var_z = 0.0;
    double cov_xz = 0.0;  ///< <{Jx,Jz}>/2 - <Jx><Jz>

    static MomentSummary from(const CollectiveMoments& m);
    /// Throws std::invalid_argument if a variance is negative or the
    /// covariance violates Cauchy-Schwarz (tolerance 1e-12).
    void validate() const;
};

/// Var(J_theta) with J_theta = cos(theta) Jz + sin(theta) Jx.
double var_along(const MomentSummary& m, double theta);

struct ThetaStar {
    double theta = 0.0;  ///< in (-pi/2, pi/2]
    double min_var = 0.0;
    bool degenerate = false;  ///< isotropic noise: theta is reported as 0
};

/// Closed-form minimizer of var_along (minor axis of the noise ellipse).
ThetaStar theta_star(const MomentSummary& m);

/// Same minimization for a raw (var_z, var_x, cov) triple.
ThetaStar theta_star(double var_z, double var_x, double cov_xz);

struct SqueezingRecord {
    double t_us = 0.0;
    double mean_spin = 0.0;  ///< |<J_y>|
    double theta_star = 0.0;
    double min_var = 0.0;
    double xi2 = 0.0;
    double xi2_dB = 0.0;
    bool collapsed = false;  ///< mean spin vanished; xi2 reported as +inf

    /// xi^2 = N min_var / <J_y>^2, flagged when <J_y>^2 < 1e-12 (N/2)^2.
    static SqueezingRecord make(double t_us, int n_atoms, double mean_spin, double theta, double min_var);
};

SqueezingRecord squeezing_record(const MomentSummary& m, double t_us);
SqueezingRecord squeezing_record(const StateVector& v, double t_us);

/// Smallest squeezing parameter any N-spin state can reach.
inline double squeezing_lower_bound(int n_atoms) { return 2.0 / (2.0 + n_atoms); }

enum class ReadoutKind { variance, spin_length };

/// Projective snapshots: one row per shot, one +-1 entry per atom
/// (sigma^z eigenvalue after the analysis rotation, +1 = |up>).
struct ShotSet {
    int n_atoms = 0;
    std::vector<std::int8_t> outcomes;  ///< row-major, shots x atoms
    ReadoutKind kind = ReadoutKind::variance;
    double theta = 0.0;
    double t_us = 0.0;
    std::uint64_t seed = 0;

    int n_shots() const { return n_atoms == 0 ? 0 : static_cast<int>(outcomes.size() / n_atoms); }
    int at(int shot, int atom) const { return outcomes[static_cast<std::size_t>(shot) * n_atoms + atom]; }
    /// Collective readout (1/2) sum_i s_i for one shot.
    double collective(int shot) const;
    std::vector<double> collective_values() const;
};

/// Samples `n_shots` bitstrings from v after the given analysis pulse
/// (applied as an ideal rotation). Shot k depends only on (seed, k).
ShotSet sample_shots(const StateVector& v, const Pulse& analysis, int n_shots, std::uint64_t seed);

/// Variance readout: rotation by -theta about y, so the collective readout is J_theta.
ShotSet sample_shots(const StateVector& v, double theta, int n_shots, std::uint64_t seed);

/// Spin-length readout: pi/2 about the preparation axis; the readout mean is -<J_y>.
ShotSet sample_spin_length(const StateVector& v, int n_shots, std::uint64_t seed);

struct ShotStatistics {
    int n = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased (n - 1 denominator)
    double se_mean = 0.0;   ///< bootstrap
    double se_variance = 0.0;
};

/// Sample mean and unbiased variance with bootstrap standard errors from
/// `resamples` resamplings driven by `seed`. Requires >= 2 values.
ShotStatistics shot_statistics(std::span<const double> values, int resamples, std::uint64_t seed);
ShotStatistics shot_statistics(const ShotSet& shots, int resamples, std::uint64_t seed);

/// CSV with a header row "a0,a1,...", one row of +-1 per shot.
void write_shots_csv(std::ostream& out, const ShotSet& shots);
/// Throws ConfigError on malformed input (ragged rows, entries other than +-1).
ShotSet read_shots_csv(std::istream& in);

struct DepthBoundPoint {
    double mean_fraction = 0.0;  ///< |<J_y>| / (k/2)
    double norm_var = 0.0;       ///< 4 Var(J_z) / k
};

/// Minimal 4 Var(J_z)/k over k-spin states with |<J_y>| = f k/2 (mixed states
/// allowed). Applies unchanged to N atoms split into k-clusters.
double sm_min_norm_var(int k, double mean_fraction);

/// The k-particle entanglement-depth bound sampled at n_points evenly spaced
/// mean-spin fractions in [0, 1]. Requires 1 <= k <= 64.
std::vector<DepthBoundPoint> sm_depth_bound(int k, int n_points);

}  // namespace spinsq
