#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "spinsq/operators.hpp"
#include "spinsq/propagator.hpp"
#include "spinsq/state.hpp"

namespace spinsq {

enum class PulseShape { square, gaussian };

/// How a microwave pulse is applied. Instantaneous pulses are ideal global
/// rotations taking zero time; finite pulses are integrated under
/// H_drive(t) (+ H_int when `interactions_on`).
struct PulseModel {
    bool finite = false;
    PulseShape shape = PulseShape::square;
    double rabi_MHz = 22.2;      ///< square pulses: Rabi frequency Omega/2pi
    double half_width_ns = 6.5;  ///< gaussian pulses: 1/sqrt(e) half-width
    bool interactions_on = true;
    double max_substep_us = 5e-4;  ///< piecewise-constant grid for shaped envelopes

    static PulseModel instantaneous() { return {}; }
    static PulseModel square(double rabi_MHz, bool interactions_on = true);
    static PulseModel gaussian(double half_width_ns, bool interactions_on = true);
};

/// Rotation by `angle` about cos(phase) x + sin(phase) y.
struct Pulse {
    double phase = 0.0;
    double angle = 0.0;
    PulseModel model;

    double duration_us() const;
    /// Signed drive frequency Omega(t)/2pi in MHz, t measured from the pulse start.
    double rabi_at(double t_us) const;
    /// Rotation angle accumulated between the pulse start and t_us.
    double area_until(double t_us) const;
};

struct FreeEvolution {
    HamiltonianSpec h;
    double t_us = 0.0;
};

using Step = std::variant<Pulse, FreeEvolution>;

struct ProtocolSchedule {
    std::vector<Step> steps;
    std::optional<Pulse> readout;

    double duration_us() const;
    void append(const ProtocolSchedule& other);
};

/// Common pulses, phases in the basis convention of StateVector.
namespace pulses {
/// pi/2 about -x: |up...up> -> coherent state along +y.
Pulse preparation(const PulseModel& model = {});
/// Same axis as the preparation: +y -> down, so a polarized state reads as |dn>.
Pulse spin_length_readout(const PulseModel& model = {});
/// Rotation by -theta about y, mapping J_theta = cos(theta) Jz + sin(theta) Jx onto Jz.
Pulse variance_readout(double theta, const PulseModel& model = {});
}  // namespace pulses

/// Product state with every spin in (|up> + i|dn>)/sqrt(2): the +1 eigenstate of
/// every sigma^y_i, <J_y> = N/2.
StateVector prepare_coherent_y(int n_sites);

/// `h` is needed only for finite pulses with interactions on.
StateVector apply_pulse(const Pulse& p, const StateVector& v, const HamiltonianSpec* h = nullptr,
                        const KrylovParams& kp = {});

/// Propagates through the part [from_us, to_us] of a pulse window.
StateVector apply_pulse_segment(const Pulse& p, const StateVector& v, const HamiltonianSpec* h,
                                double from_us, double to_us, const KrylovParams& kp = {});

/// States at the requested checkpoints (sorted, within the schedule). A
/// checkpoint at time t sees every zero-duration step scheduled at t. The
/// readout pulse is not applied.
std::vector<StateVector> run_schedule(const ProtocolSchedule& s, const StateVector& v0,
                                      const std::vector<double>& checkpoints,
                                      const KrylovParams& kp = {});

/// Final state of the schedule, readout excluded.
StateVector run_to_end(const ProtocolSchedule& s, const StateVector& v0, const KrylovParams& kp = {});

/// Free-evolution fractions of a WAHUHA cycle between and around its four pulses.
struct WahuhaSpacing {
    std::array<double, 5> fractions{1.0 / 6, 1.0 / 6, 2.0 / 6, 1.0 / 6, 1.0 / 6};
};

/// One Floquet cycle of duration t_F: pi/2 pulses about +x, +y, -y, -x
/// separated by free evolution under `h`. Finite pulses are centred on the
/// instants the instantaneous sequence would use; their duration is taken
/// out of the neighbouring delays. Throws ConfigError if the pulses do not fit.
ProtocolSchedule wahuha_cycle(const HamiltonianSpec& h, double t_F_us,
                              const PulseModel& model = {}, const WahuhaSpacing& spacing = {});

/// Quench: free evolution for t_us.
ProtocolSchedule standard_schedule(const HamiltonianSpec& h, double t_us);

/// Evolve t1, rotate by `angle` about y, evolve t2.
ProtocolSchedule multistep_schedule(const HamiltonianSpec& h, double t1_us, double angle,
                                    double t2_us, const PulseModel& model = {});

}  // namespace spinsq
