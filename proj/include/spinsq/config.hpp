#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinsq/error_models.hpp"
#include "spinsq/lattice.hpp"
#include "spinsq/operators.hpp"
#include "spinsq/propagator.hpp"
#include "spinsq/protocol.hpp"

namespace spinsq {

inline constexpr int kConfigVersion = 1;

/// Either an explicit list of times or an evenly spaced range [start, stop].
struct TimeGrid {
    double start_us = 0.0;
    double stop_us = 1.0;
    double step_us = 0.05;
    std::vector<double> explicit_us;

    /// Sorted checkpoint list. Throws ConfigError on an empty or unsorted grid.
    std::vector<double> points() const;
};

enum class ProtocolKind { quench, multistep, floquet };

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::quench;
    PulseModel preparation;  ///< finite models start from |up...up> and integrate the pulse
    PulseModel pulse;        ///< model for mid-sequence pulses

    // multistep
    double t1_us = 0.0;                ///< <= 0: scale from the reference protocol
    std::optional<double> angle_rad;   ///< unset: semiclassical alignment estimate
    double t1_ref_us = 0.13;
    int ref_rows = 6;
    int ref_cols = 6;

    // floquet
    double t_F_us = 0.36;
    std::vector<int> n_cycles{0, 1, 2, 3};
    std::optional<double> insert_at_us;  ///< unset: optimum of the no-cycle run
    WahuhaSpacing spacing;
};

struct ScalingConfig {
    std::vector<std::pair<int, int>> sizes{{2, 2}, {3, 3}, {4, 4}};
};

struct OatConfig {
    std::vector<int> sizes{8, 16, 32, 64, 128, 256};
    std::optional<double> chi_MHz;  ///< unset: chi = J S / N per size
    int n_times = 200;              ///< points of the emitted curves, over (0, 2 t*]
};

struct ThetaScanConfig {
    double t_us = 0.3;
    int n_theta = 16;
};

struct SemiclassicalConfig {
    int n_atoms = 400;
    int n_points = 20000;
    double m_xy = 1.0;
    std::optional<double> J_tilde_MHz;  ///< unset: matched to the lattice rotor
    std::vector<double> snapshot_times_us{0.0, 0.1, 0.2, 0.3};
};

struct SmConfig {
    std::vector<int> k{1, 2, 3, 4, 6, 10};
    int n_points = 101;
};

struct RunConfig {
    int version = kConfigVersion;
    LatticeSpec lattice{4, 4, 15.0, Boundary::open, {}};
    double J_MHz = 0.25;
    HamiltonianKind hamiltonian = HamiltonianKind::XY;
    ProtocolConfig protocol;
    ErrorModel errors = ErrorModel::ideal();
    int shots = 0;  ///< per readout setting and time; 0 = exact moments only
    int realizations = 1;
    int bootstrap = 200;
    TimeGrid time;
    std::uint64_t seed = 1;
    KrylovParams krylov{30, 0.1, 1e-10, 20};
    int workers = 1;
    std::string out_dir = "out";
    bool svg = false;
    int half_window = 2;

    ScalingConfig scaling;
    OatConfig oat;
    ThetaScanConfig theta_scan;
    SemiclassicalConfig semiclassical;
    SmConfig sm;

    /// Throws ConfigError describing the first problem found.
    void validate() const;
};

/// Parses a JSON run config. Unknown keys are rejected; missing keys keep
/// their defaults. An "errors" section enables the error model with the
/// experimental defaults for unspecified fields. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// JSON round trip of parse_config.
std::string config_to_json(const RunConfig& cfg);

}  // namespace spinsq
