#include "spinsq/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "spinsq/errors.hpp"
#include "spinsq/rng.hpp"

namespace spinsq {

MomentSummary MomentSummary::from(const CollectiveMoments& m) {
    MomentSummary s;
    s.n_atoms = m.n_sites;
    s.mean_x = m.mean[0];
    s.mean_y = m.mean[1];
    s.mean_z = m.mean[2];
    s.var_x = m.var(Axis::x);
    s.var_z = m.var(Axis::z);
    s.cov_xz = m.cov(Axis::x, Axis::z);
    return s;
}

void MomentSummary::validate() const {
    if (var_x < -1e-12 || var_z < -1e-12) throw std::invalid_argument("MomentSummary: negative variance");
    const double bound = std::sqrt(std::max(var_x, 0.0) * std::max(var_z, 0.0)) + 1e-12;
    if (std::abs(cov_xz) > bound) throw std::invalid_argument("MomentSummary: |cov| exceeds sqrt(var_x var_z)");
}

double var_along(const MomentSummary& m, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return c * c * m.var_z + s * s * m.var_x + 2.0 * s * c * m.cov_xz;
}

ThetaStar theta_star(double var_z, double var_x, double cov_xz) {
    ThetaStar out;
    const double diff = var_z - var_x;
    const double radius = 0.5 * std::hypot(diff, 2.0 * cov_xz);
    const double scale = std::abs(var_z) + std::abs(var_x) + std::abs(cov_xz);
    out.min_var = 0.5 * (var_z + var_x) - radius;
    if (radius <= 1e-14 * scale || radius == 0.0) {
        out.theta = 0.0;
        out.min_var = var_z;
        out.degenerate = true;
        return out;
    }
    // var(theta) = mean + (diff/2) cos 2theta + cov sin 2theta; the minimum sits
    // opposite the phase of the (diff/2, cov) vector.
    double th = 0.5 * std::atan2(2.0 * cov_xz, diff) + 0.5 * std::numbers::pi;
    while (th > 0.5 * std::numbers::pi) th -= std::numbers::pi;
    while (th <= -0.5 * std::numbers::pi) th += std::numbers::pi;
    out.theta = th;
    return out;
}

ThetaStar theta_star(const MomentSummary& m) { return theta_star(m.var_z, m.var_x, m.cov_xz); }

SqueezingRecord SqueezingRecord::make(double t_us, int n_atoms, double mean_spin, double theta, double min_var) {
    SqueezingRecord r;
    r.t_us = t_us;
    r.mean_spin = std::abs(mean_spin);
    r.theta_star = theta;
    r.min_var = min_var;
    const double half = 0.5 * n_atoms;
    if (mean_spin * mean_spin < 1e-12 * half * half) {
        r.collapsed = true;
        r.xi2 = std::numeric_limits<double>::infinity();
        r.xi2_dB = std::numeric_limits<double>::infinity();
        return r;
    }
    r.xi2 = n_atoms * min_var / (mean_spin * mean_spin);
    r.xi2_dB = 10.0 * std::log10(r.xi2);
    return r;
}

SqueezingRecord squeezing_record(const MomentSummary& m, double t_us) {
    const ThetaStar ts = theta_star(m);
    return SqueezingRecord::make(t_us, m.n_atoms, m.mean_y, ts.theta, ts.min_var);
}

SqueezingRecord squeezing_record(const StateVector& v, double t_us) {
    return squeezing_record(MomentSummary::from(collective_expectations(v)), t_us);
}

double ShotSet::collective(int shot) const {
    int s = 0;
    const std::size_t base = static_cast<std::size_t>(shot) * n_atoms;
    for (int i = 0; i < n_atoms; ++i) s += outcomes[base + i];
    return 0.5 * s;
}

std::vector<double> ShotSet::collective_values() const {
    std::vector<double> out(static_cast<std::size_t>(n_shots()));
    for (int k = 0; k < n_shots(); ++k) out[static_cast<std::size_t>(k)] = collective(k);
    return out;
}

ShotSet sample_shots(const StateVector& v, const Pulse& analysis, int n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw ConfigError("sample_shots: need at least one shot");
    StateVector r = v;
    rotate_global(r, in_plane_axis(analysis.phase), analysis.angle);

    std::vector<double> cdf(r.dim());
    double acc = 0.0;
    for (std::size_t s = 0; s < r.dim(); ++s) {
        acc += std::norm(r[s]);
        cdf[s] = acc;
    }

    ShotSet out;
    out.n_atoms = v.n_sites();
    out.seed = seed;
    out.outcomes.resize(static_cast<std::size_t>(n_shots) * out.n_atoms);
    const CounterRng root(seed);
    for (int k = 0; k < n_shots; ++k) {
        CounterRng rng = root.split(static_cast<std::uint64_t>(k));
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        const auto s = static_cast<std::size_t>(it - cdf.begin());
        for (int i = 0; i < out.n_atoms; ++i) {
            out.outcomes[static_cast<std::size_t>(k) * out.n_atoms + i] = ((s >> i) & 1U) ? 1 : -1;
        }
    }
    return out;
}

ShotSet sample_shots(const StateVector& v, double theta, int n_shots, std::uint64_t seed) {
    ShotSet out = sample_shots(v, pulses::variance_readout(theta), n_shots, seed);
    out.kind = ReadoutKind::variance;
    out.theta = theta;
    return out;
}

ShotSet sample_spin_length(const StateVector& v, int n_shots, std::uint64_t seed) {
    ShotSet out = sample_shots(v, pulses::spin_length_readout(), n_shots, seed);
    out.kind = ReadoutKind::spin_length;
    return out;
}

namespace {

void mean_var(std::span<const double> x, double& mean, double& var) {
    // two-pass for accuracy
    double s = 0.0;
    for (double v : x) s += v;
    mean = s / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    var = ss / static_cast<double>(x.size() - 1);
}

}  // namespace

ShotStatistics shot_statistics(std::span<const double> values, int resamples, std::uint64_t seed) {
    if (values.size() < 2) throw std::invalid_argument("shot_statistics: need at least two shots");
    ShotStatistics st;
    st.n = static_cast<int>(values.size());
    mean_var(values, st.mean, st.variance);
    if (resamples < 2) return st;

    const std::size_t n = values.size();
    std::vector<double> draw(n);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    std::vector<double> vars(static_cast<std::size_t>(resamples));
    const CounterRng root(seed, 0xb0075742ULL);
    for (int b = 0; b < resamples; ++b) {
        CounterRng rng = root.split(static_cast<std::uint64_t>(b));
        for (std::size_t i = 0; i < n; ++i) draw[i] = values[rng() % n];
        mean_var(draw, means[static_cast<std::size_t>(b)], vars[static_cast<std::size_t>(b)]);
    }
    double m = 0.0;
    double v = 0.0;
    mean_var(means, m, st.se_mean);
    mean_var(vars, v, st.se_variance);
    st.se_mean = std::sqrt(st.se_mean);
    st.se_variance = std::sqrt(st.se_variance);
    return st;
}

ShotStatistics shot_statistics(const ShotSet& shots, int resamples, std::uint64_t seed) {
    const std::vector<double> j = shots.collective_values();
    return shot_statistics(j, resamples, seed);
}

void write_shots_csv(std::ostream& out, const ShotSet& shots) {
    for (int i = 0; i < shots.n_atoms; ++i) out << (i ? "," : "") << 'a' << i;
    out << '\n';
    for (int k = 0; k < shots.n_shots(); ++k) {
        for (int i = 0; i < shots.n_atoms; ++i) out << (i ? "," : "") << shots.at(k, i);
        out << '\n';
    }
}

ShotSet read_shots_csv(std::istream& in) {
    ShotSet out;
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!header_seen) {
            header_seen = true;
            // a header row is any row that is not purely numeric
            const bool numeric = !fields.empty() && (fields[0] == "1" || fields[0] == "-1" || fields[0] == "+1");
            if (!numeric) {
                out.n_atoms = static_cast<int>(fields.size());
                continue;
            }
            out.n_atoms = static_cast<int>(fields.size());
        }
        if (static_cast<int>(fields.size()) != out.n_atoms) {
            throw ConfigError("shots csv: line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " entries, expected " +
                              std::to_string(out.n_atoms));
        }
        for (const std::string& x : fields) {
            if (x == "1" || x == "+1") {
                out.outcomes.push_back(1);
            } else if (x == "-1") {
                out.outcomes.push_back(-1);
            } else {
                throw ConfigError("shots csv: line " + std::to_string(line_no) + ": entry '" + x +
                                  "' is not +-1");
            }
        }
    }
    if (out.n_atoms == 0) throw ConfigError("shots csv: empty input");
    return out;
}

// ---------------------------------------------------------------------------
// Entanglement-depth bound.
//
// For a spin j = k/2 the smallest Var(J_z) compatible with <J_y> = f j is
//   min_c min_rho <(J_z - c)^2>   subject to <J_y> = f j,
// since Var = min_c <(J_z - c)^2>. For fixed c the inner problem is convex in
// rho and equals its Lagrange dual max_l [E0(c, l) + l f j], where E0 is the
// ground energy of (J_z - c)^2 - l J_y. J_y is swapped for J_x (a rotation
// about z) so that the matrix is real tridiagonal in the J_z basis.

namespace {

class CollectiveSpin {
public:
    explicit CollectiveSpin(int k) : j_(0.5 * k), dim_(k + 1), diag_(dim_), off_(std::max(dim_ - 1, 1)) {
        for (int a = 0; a + 1 < dim_; ++a) {
            const double m = -j_ + a;
            off_(a) = 0.5 * std::sqrt(j_ * (j_ + 1.0) - m * (m + 1.0));
        }
    }

    double j() const { return j_; }

    double ground_energy(double c, double lambda) {
        for (int a = 0; a < dim_; ++a) {
            const double m = -j_ + a;
            diag_(a) = (m - c) * (m - c);
        }
        if (dim_ == 1) return diag_(0);
        Eigen::VectorXd sub = -lambda * off_.head(dim_ - 1);
        solver_.computeFromTridiagonal(diag_, sub, Eigen::EigenvaluesOnly);
        return solver_.eigenvalues()(0);
    }

private:
    double j_;
    int dim_;
    Eigen::VectorXd diag_;
    Eigen::VectorXd off_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
};

template <class F>
double golden_max(F&& f, double lo, double hi, int iters) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return std::max({f1, f2, f(lo)});
}

double dual_value(CollectiveSpin& spin, double c, double target) {
    auto h = [&](double l) { return spin.ground_energy(c, l) + l * target; };
    double hi = 1.0;
    while (h(2.0 * hi) > h(hi) && hi < 1e8) hi *= 2.0;
    return golden_max(h, 0.0, 2.0 * hi, 80);
}

}  // namespace

double sm_min_norm_var(int k, double f) {
    if (k < 1 || k > 64) throw ConfigError("sm bound: k must be in [1, 64]");
    f = std::clamp(std::abs(f), 0.0, 1.0);
    if (f >= 1.0) return 1.0;
    CollectiveSpin spin(k);
    const double target = f * spin.j();
    auto g = [&](double c) { return dual_value(spin, c, target); };

    // Scan the shift c over [0, j]. At small f the minima sit in narrow
    // basins near the eigenvalues m, and near m + 1/2 where two levels are
    // mixed, so those points join the grid.
    std::vector<double> cs;
    const int n_grid = 16;
    for (int i = 0; i <= n_grid; ++i) cs.push_back(spin.j() * i / n_grid);
    for (double c = 0.0; c <= spin.j() + 1e-12; c += 0.5) cs.push_back(c);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end(), [](double a, double b) { return b - a < 1e-12; }), cs.end());
    std::vector<double> vals;
    for (double c : cs) vals.push_back(g(c));

    // golden refinement between the neighbours of each local minimum
    double best = *std::min_element(vals.begin(), vals.end());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const bool left_ok = i == 0 || vals[i] <= vals[i - 1];
        const bool right_ok = i + 1 == cs.size() || vals[i] <= vals[i + 1];
        if (!left_ok || !right_ok) continue;
        const double lo = i == 0 ? cs[i] : cs[i - 1];
        const double hi = i + 1 == cs.size() ? cs[i] : cs[i + 1];
        if (hi > lo) best = std::min(best, -golden_max([&](double c) { return -g(c); }, lo, hi, 60));
    }
    return std::max(best, 0.0) * 4.0 / k;
}

std::vector<DepthBoundPoint> sm_depth_bound(int k, int n_points) {
    if (k < 1 || k > 64) throw ConfigError("sm bound: k must be in [1, 64]");
    if (n_points < 2) throw ConfigError("sm bound: need at least two points");
    std::vector<DepthBoundPoint> out;
    out.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double f = static_cast<double>(i) / (n_points - 1);
        out.push_back({f, sm_min_norm_var(k, f)});
    }
    return out;
}

}  // namespace spinsq
