#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spinsq/config.hpp"
#include "spinsq/error_models.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/protocol.hpp"

namespace spinsq {

// ---------------------------------------------------------------- optima --

struct Optimum {
    double t_us = 0.0;
    double xi2 = 0.0;
    double xi2_dB = 0.0;
    bool fallback = false;  ///< parabola vertex left the window; grid minimum reported
    int grid_index = 0;
};

/// Least-squares parabola through xi2_dB over the grid minimum +- half_window
/// points. Throws NumericalError with fewer than 5 points or when the minimum
/// sits on the edge of the grid.
Optimum extract_optimum(const std::vector<double>& t_us, const std::vector<double>& xi2_dB,
                        int half_window = 2);
Optimum extract_optimum(const std::vector<SqueezingRecord>& records, int half_window = 2);

/// First time after the start at which xi2 climbs back to `level` (linear
/// interpolation in t). `crossed` is false if the series stays below.
struct Crossing {
    double t_us = 0.0;
    bool crossed = false;
};
Crossing sub_level_duration(const std::vector<double>& t_us, const std::vector<double>& xi2, double level = 1.0);

// ---------------------------------------------------------------- fits --

/// log y = log A + slope log x with standard errors from the residuals.
struct PowerLawFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double log_prefactor = 0.0;
    double log_prefactor_se = 0.0;
    int n = 0;
};
/// Requires >= 3 strictly positive points.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Experimental reference exponents, for annotating reports only.
inline constexpr double kExperimentNu = 0.18;
inline constexpr double kExperimentNuErr = 0.02;
inline constexpr double kExperimentMu = 0.32;
inline constexpr double kExperimentMuErr = 0.03;

struct ScalingEntry {
    std::string label;
    int n_atoms = 0;
    Optimum raw;
    Optimum corrected;
    bool ok = true;
    std::string error;
};

struct ScalingResult {
    std::vector<ScalingEntry> entries;
    bool fitted = false;  ///< false when fewer than 3 sizes succeeded
    PowerLawFit xi2_raw, t_raw, xi2_corrected, t_corrected;

    double nu() const { return -xi2_raw.slope; }
    double mu() const { return t_raw.slope; }
};

/// Fits nu (xi2* ~ N^-nu) and mu (t* ~ N^mu) over the successful entries;
/// raw and corrected optima are fitted independently.
ScalingResult fit_scaling(std::vector<ScalingEntry> entries);

/// var = offset + a cos 2 theta + b sin 2 theta, weighted by 1/se^2 when
/// every se is positive.
struct SinusoidFit {
    double offset = 0.0;
    double amplitude = 0.0;  ///< sqrt(a^2 + b^2)
    double amplitude_se = 0.0;
    double theta_star = 0.0; ///< minimum, in (-pi/2, pi/2]
    double theta_star_se = 0.0;
    double residual_rms = 0.0;
    bool degenerate = false;  ///< amplitude not resolved (< 2 se, or exactly 0)
};
SinusoidFit fit_sinusoid(const std::vector<double>& theta, const std::vector<double>& var,
                         const std::vector<double>& se = {});

// ------------------------------------------------------------- pipeline --

/// Heisenberg-picture readout direction n of an analysis pulse: after the
/// pulse, sigma^z measures n.J.
std::array<double, 3> readout_axis(const Pulse& p);

/// Analysis pulse actually applied for a commanded rotation, with the model's
/// over-rotation added to nonzero rotations.
Pulse biased(const Pulse& p, double bias_deg);

/// Collective moments of one hole realization.
struct RealizationMoments {
    CollectiveMoments m;
    int n_failed = 0;
};

/// Readout statistics pooled over equally weighted realizations; failed
/// atoms always read +1/2 each.
class PooledReadout {
public:
    PooledReadout(std::vector<RealizationMoments> r, int n_imaged);

    double mean(const std::array<double, 3>& n) const;
    double var(const std::array<double, 3>& n) const;
    int n_imaged() const { return n_imaged_; }

private:
    std::vector<RealizationMoments> r_;
    int n_imaged_;
};

struct ReadoutOptimum {
    double theta = 0.0;  ///< commanded analysis angle
    double min_var = 0.0;
    double mean_theta = 0.0;
    double spin_length_mean = 0.0;  ///< readout mean of the spin-length pulse (= -<J_y> ideally)
};

/// Minimizes the pooled readout variance over the commanded angle. Uses the
/// closed form when the problem reduces to the ideal one, a scan with golden
/// refinement otherwise.
ReadoutOptimum optimize_readout(const PooledReadout& p, double bias_deg);

struct TimePoint {
    double t_us = 0.0;      ///< physical time
    double t_eff_us = 0.0;  ///< interaction time outside inserted cycles
    SqueezingRecord exact;      ///< model moments, no detection errors
    SqueezingRecord raw;        ///< first-order detection map applied
    SqueezingRecord corrected;  ///< detection_inverse of raw
    double mean_theta_raw = 0.0;
    double spin_length_raw = 0.0;

    bool has_shots = false;
    SqueezingRecord shot_raw;
    SqueezingRecord shot_corrected;
    double shot_mean = 0.0;     ///< spin-length readout mean
    double shot_mean_se = 0.0;
    double shot_var = 0.0;
    double shot_var_se = 0.0;
    double shot_mean_theta = 0.0;
    double shot_xi2_raw_se = 0.0;
    double shot_xi2_corrected_se = 0.0;
};

struct Series {
    std::string label;
    int n_imaged = 0;
    std::vector<TimePoint> points;

    std::vector<SqueezingRecord> exact_records() const;
    std::vector<SqueezingRecord> raw_records() const;
    std::vector<SqueezingRecord> corrected_records() const;
    /// Shot-based records when present, exact-moment ones otherwise.
    std::vector<SqueezingRecord> best_raw_records() const;
    std::vector<SqueezingRecord> best_corrected_records() const;
};

/// Builds the schedule for the interacting atoms of one realization.
using ScheduleBuilder = std::function<ProtocolSchedule(const HamiltonianSpec&)>;

/// Runs every realization of `builder` and evaluates the measurement pipeline
/// at `checkpoints` (physical times). `t_eff` labels each checkpoint.
Series run_series(const RunConfig& cfg, const ScheduleBuilder& builder, const std::vector<double>& checkpoints,
                  const std::vector<double>& t_eff, const std::string& label);

HamiltonianSpec make_hamiltonian(const LatticeSpec& lattice, HamiltonianKind kind, double J_MHz);

/// Single quench over the config's time grid.
Series simulate_quench(const RunConfig& cfg);

/// Dispatches on cfg.protocol.kind; floquet runs return one series per n.
std::vector<Series> simulate(const RunConfig& cfg);

/// Map f over [0, n) on at most `workers` threads; results are stored by index.
void parallel_for(int n, int workers, const std::function<void(int)>& f);

// -------------------------------------------------------------- experiments --

struct ThetaScanRow {
    double theta = 0.0;
    double var = 0.0;     ///< shot estimate (exact when shots = 0)
    double var_se = 0.0;
    double exact_var = 0.0;
};

struct ThetaScanResult {
    int n_imaged = 0;
    double t_us = 0.0;
    std::vector<ThetaScanRow> rows;
    SinusoidFit fit;
    double exact_theta_star = 0.0;
    double exact_min_var = 0.0;
};

/// Default grid: n evenly spaced angles over (-pi/2, pi/2].
std::vector<double> theta_grid(int n);

ThetaScanResult theta_scan(const RunConfig& cfg, double t_us, const std::vector<double>& thetas);

ScalingResult scaling_sweep(const RunConfig& cfg, const std::vector<std::pair<int, int>>& sizes);

/// OAT optima for each N with chi from the config (or the Kac rate).
ScalingResult oat_scaling(const std::vector<int>& sizes, double J_MHz, std::optional<double> chi_MHz = {});

struct FloquetRun {
    int n_cycles = 0;
    Series series;
    Crossing sub_sql;  ///< time at which xi2 returns to 1
};

struct FloquetResult {
    double t_insert_us = 0.0;
    std::vector<FloquetRun> runs;
};

/// Quench to the insertion time, n WAHUHA cycles, then free evolution again.
/// The config's time grid is in interaction time outside the cycles.
FloquetResult floquet_experiment(const RunConfig& cfg, const std::vector<int>& n_cycles);

/// 1 - |<Heis|cycle>|^2 after one cycle of length t_F from v, against exact
/// evolution under the averaged (Heisenberg, J/2) Hamiltonian.
double floquet_cycle_deviation(const HamiltonianSpec& xy, const StateVector& v, double t_F_us,
                               const PulseModel& model = {}, const WahuhaSpacing& spacing = {},
                               const KrylovParams& kp = {});

struct MultistepPlan {
    double t1_us = 0.0;
    double angle_rad = 0.0;
    double shear = 0.0;  ///< dimensionless shear 2 pi chi N t1 at the rotation
};

/// Keeps the shear at the rotation equal to that of the reference protocol
/// (t1_ref on the reference lattice) and aligns the sheared ellipse with the
/// equator using the linear classical shear.
MultistepPlan plan_multistep(const RunConfig& cfg);

struct MultistepResult {
    MultistepPlan plan;
    Series single;
    Series multi;
};
MultistepResult multistep_experiment(const RunConfig& cfg);

}  // namespace spinsq
