#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "spinsq/lattice.hpp"
#include "spinsq/state.hpp"

namespace spinsq {

enum class HamiltonianKind { XY, Heisenberg, ZZ, OAT };

/// Frequencies are in MHz (E/h); propagators apply exp(-i 2 pi H t) with t in
/// microseconds.
///
///   XY          -(J/2)  sum_{i<j} w_ij (sx_i sx_j + sy_i sy_j)
///   Heisenberg  -(2J/3) sum_{i<j} w_ij s_i . s_j
///   ZZ                  sum_{i<j} w_ij sz_i sz_j          (J unused)
///   OAT          chi * Jz^2                               (cm unused)
struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::XY;
    double J_MHz = 0.25;
    CouplingMatrix cm;
    double chi_MHz = 0.0;
    int oat_sites = 0;

    static HamiltonianSpec xy(CouplingMatrix cm, double J_MHz);
    static HamiltonianSpec heisenberg(CouplingMatrix cm, double J_MHz);
    static HamiltonianSpec zz(CouplingMatrix cm);
    static HamiltonianSpec oat(int n_sites, double chi_MHz);

    int n_sites() const;
};

/// Matrix-free operator of the form
///   diag(d) + sum_p g_p (s+_i s-_j + s-_i s+_j) + (Omega/2) sum_i (cos phi sx_i + sin phi sy_i).
/// The diagonal is precomputed; off-diagonal terms are gathered on the fly so
/// each output amplitude is an independent, fixed-order sum.
class Hamiltonian {
public:
    Hamiltonian() = default;
    explicit Hamiltonian(int n_sites);
    explicit Hamiltonian(const HamiltonianSpec& spec);

    int n_sites() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }

    /// Adds a uniform transverse drive of Rabi frequency `rabi_MHz` about the
    /// in-plane axis at azimuth `phase`. Replaces any previous drive.
    void set_drive(double rabi_MHz, double phase);
    void clear_drive() { drive_ = 0.0; }

    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    StateVector apply(const StateVector& v) const;

    /// Diagonal element <s|H|s> (drive and flip-flops excluded).
    double diagonal(std::size_t s) const { return diag_.empty() ? 0.0 : diag_[s]; }

    struct FlipFlop {
        std::uint64_t mask;
        double coeff;
    };
    std::span<const FlipFlop> flip_flops() const { return pairs_; }
    cplx drive_coefficient() const { return drive_; }

private:
    int n_ = 0;
    std::vector<double> diag_;
    std::vector<FlipFlop> pairs_;
    std::vector<double> ff_table_;  // n x n flip-flop coefficients, empty when there are none
    cplx drive_ = 0.0;  // (Omega/2) e^{-i phi}: amplitude of s+ in the drive
};

/// H v without materializing H. Throws std::invalid_argument on a dimension
/// mismatch.
StateVector apply_hamiltonian(const HamiltonianSpec& h, const StateVector& v);

enum class Axis { x = 0, y = 1, z = 2 };

/// J_axis v with J_a = (1/2) sum_i sigma^a_i.
StateVector apply_collective(Axis axis, const StateVector& v);

/// Expectation values of the collective spin: means <J_a> and symmetrized
/// second moments <{J_a, J_b}>/2, indexed by Axis.
struct CollectiveMoments {
    int n_sites = 0;
    std::array<double, 3> mean{};
    std::array<std::array<double, 3>, 3> second{};

    double var(Axis a) const;
    double cov(Axis a, Axis b) const;
};

/// Throws std::invalid_argument when |‖v‖ - 1| > 1e-10.
CollectiveMoments collective_expectations(const StateVector& v);

/// exp(-i angle n.J) applied to every site: a global rotation of the Bloch
/// vector by `angle` about the unit axis n (right-hand rule).
void rotate_global(StateVector& v, std::array<double, 3> axis, double angle);

/// Unit vector in the x-y plane at azimuth `phase`.
inline std::array<double, 3> in_plane_axis(double phase) {
    return {std::cos(phase), std::sin(phase), 0.0};
}

}  // namespace spinsq
