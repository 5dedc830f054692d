#pragma once

#include <cstdint>
#include <vector>

#include "spinsq/lattice.hpp"
#include "spinsq/measurement.hpp"

namespace spinsq {

/// State-preparation and detection imperfections.
struct ErrorModel {
    double eta = 0.02;       ///< STIRAP failure probability per atom
    double eps_up = 0.025;   ///< P(|up> read as |dn>)
    double eps_down = 0.010; ///< P(|dn> read as |up>)
    double rotation_bias_deg = 0.0;  ///< over-rotation added to every analysis pulse
    std::uint64_t seed = 0;

    static ErrorModel ideal() { return {0.0, 0.0, 0.0, 0.0, 0}; }

    /// Throws ConfigError unless eta lies in [0, 1], the readout
    /// probabilities in [0, 1), and eps_up + eps_down < 1/2.
    void validate() const;
    bool has_detection_errors() const { return eps_up > 0.0 || eps_down > 0.0; }
};

/// One draw of STIRAP failures. Failed atoms stay in the ground state: they
/// are removed from the dynamics and always image as |up>.
struct HoleRealization {
    LatticeSpec lattice;      ///< interacting atoms only
    std::vector<int> failed;  ///< grid indices of failed atoms
    int n_imaged = 0;         ///< atoms present in the tweezers (interacting + failed)

    int n_failed() const { return static_cast<int>(failed.size()); }
};

/// Realization `index` of the hole pattern; depends only on (em.seed, index).
HoleRealization apply_stirap_holes(const LatticeSpec& spec, const ErrorModel& em,
                                   std::uint64_t index = 0);

/// Appends `n_failed` always-up atoms to every shot.
ShotSet append_failed_atoms(const ShotSet& shots, int n_failed);

/// Independent bit flips: +1 -> -1 with probability eps_up, -1 -> +1 with
/// probability eps_down. Flip of (shot k, atom i) depends only on (seed, k, i).
ShotSet detection_forward_shots(const ShotSet& shots, const ErrorModel& em, std::uint64_t seed);

struct ReadoutMoments {
    double mean = 0.0;
    double var = 0.0;
};

/// First-order detection map for a collective readout of N atoms:
///   <J>  = (N/2)(e_dn - e_up) + (1 - e_dn - e_up) <J~>
///   Var  = (1 - 2e_dn - 2e_up) Var~ + e_dn (N/2 - <J~_theta>) + e_up (N/2 + <J~_theta>)
ReadoutMoments detection_forward_moments(double mean_tilde, double var_tilde, double mean_theta_tilde,
                                         int n_atoms, const ErrorModel& em);

enum class InverseMode {
    exact,              ///< invert the <J_theta> term too
    neglect_mean_theta  ///< drop it, valid for |<J_theta>| << N/2
};

/// Algebraic inverse of detection_forward_moments. `mean_theta` is the
/// measured mean of the variance readout. Throws NumericalError when the map
/// is singular.
ReadoutMoments detection_inverse(double mean, double var, double mean_theta, int n_atoms,
                                 const ErrorModel& em, InverseMode mode = InverseMode::exact);

/// Inverse of the mean map alone.
double detection_inverse_mean(double mean, int n_atoms, const ErrorModel& em);

}  // namespace spinsq
