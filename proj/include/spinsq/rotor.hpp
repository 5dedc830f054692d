#pragma once

#include <vector>

#include "spinsq/measurement.hpp"
#include "spinsq/operators.hpp"
#include "spinsq/state.hpp"

namespace spinsq {

/// State in the symmetric J = N/2 sector. Amplitude a sits at J_z eigenvalue
/// m = a - N/2.
class DickeState {
public:
    DickeState() = default;
    DickeState(int n_atoms, std::vector<cplx> amplitudes);

    /// Coherent state along +y, the symmetric-sector image of prepare_coherent_y.
    static DickeState coherent_y(int n_atoms);
    /// |J = N/2, m>
    static DickeState dicke(int n_atoms, double m);

    int n_atoms() const { return n_; }
    double m_at(int a) const { return a - 0.5 * n_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    double norm() const;

private:
    int n_ = 0;
    std::vector<cplx> amps_;
};

/// exp(-i 2 pi chi Jz^2 t): amplitude m picks up exp(-i 2 pi chi m^2 t).
DickeState oat_evolve(const DickeState& d, double chi_MHz, double t_us);

/// Exact collective moments from ladder-operator matrix elements.
CollectiveMoments dicke_moments(const DickeState& d);

/// Embeds a Dicke state into the full 2^N register (N <= 20).
StateVector to_state_vector(const DickeState& d);

/// Squeezing records of OAT evolution from the coherent-y state.
std::vector<SqueezingRecord> oat_squeezing_curve(int n_atoms, double chi_MHz,
                                                 const std::vector<double>& t_grid);

/// <J_y>(t) under OAT from the coherent-y state.
double rotor_magnetization(int n_atoms, double chi_MHz, double t_us);

/// Revival period 1/(2 chi) after which |<J_y>| returns to N/2.
inline double oat_revival_time(double chi_MHz) { return 0.5 / chi_MHz; }

struct OatOptimum {
    double t_us = 0.0;
    double xi2 = 0.0;
};

/// First (global) minimum of xi^2(t) on (0, t_rev/2): dense scan, then
/// golden-section refinement.
OatOptimum oat_optimum(int n_atoms, double chi_MHz);

/// Twisting rate of a uniformly coupled N-atom ensemble with the same mean
/// coupling as a square lattice of nearest-neighbour exchange J:
/// chi = J S / N, with S the infinite-lattice sum of 1/r^3 per site: the
/// bulk rotor rate 2 J (N S / 2) / N^2, so chi N is independent of N.
double oat_kac_chi(int n_atoms, double J_MHz);

}  // namespace spinsq
