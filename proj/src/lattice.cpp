#include "spinsq/lattice.hpp"

#include <cmath>
#include <string>

#include "spinsq/errors.hpp"

namespace spinsq {

void LatticeSpec::validate() const {
    if (rows < 1 || cols < 1) throw ConfigError("lattice: rows and cols must be positive");
    if (!(spacing_um > 0.0)) throw ConfigError("lattice: spacing_um must be > 0");
    for (int h : holes) {
        if (h < 0 || h >= n_grid()) {
            throw ConfigError("lattice: hole index " + std::to_string(h) + " outside the grid");
        }
    }
    if (n_atoms() < 1) throw ConfigError("lattice: every site is a hole (empty lattice)");
}

std::vector<Position> build_lattice(const LatticeSpec& spec) {
    spec.validate();
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(spec.n_atoms()));
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            if (spec.holes.contains(r * spec.cols + c)) continue;
            out.push_back({c * spec.spacing_um, r * spec.spacing_um});
        }
    }
    return out;
}

CouplingMatrix::CouplingMatrix(int n_sites)
    : n_(n_sites), w_(static_cast<std::size_t>(n_sites) * n_sites, 0.0) {}

CouplingMatrix CouplingMatrix::uniform(int n_sites, double value) {
    CouplingMatrix cm(n_sites);
    for (int i = 0; i < n_sites; ++i)
        for (int j = i + 1; j < n_sites; ++j) cm.set(i, j, value);
    return cm;
}

void CouplingMatrix::set(int i, int j, double value) {
    w_[static_cast<std::size_t>(i) * n_ + j] = value;
    w_[static_cast<std::size_t>(j) * n_ + i] = value;
}

double CouplingMatrix::pair_sum() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) s += (*this)(i, j);
    return s;
}

namespace {

double min_image(double d, double period) {
    if (period <= 0.0) return d;
    return d - period * std::round(d / period);
}

}  // namespace

CouplingMatrix coupling_matrix(const std::vector<Position>& positions, double spacing_um,
                               Boundary boundary, int rows, int cols) {
    if (positions.empty()) throw ConfigError("coupling_matrix: no positions");
    if (boundary == Boundary::periodic && (rows < 1 || cols < 1)) {
        throw ConfigError("coupling_matrix: periodic boundary needs the grid extent");
    }
    const double lx = boundary == Boundary::periodic ? cols * spacing_um : 0.0;
    const double ly = boundary == Boundary::periodic ? rows * spacing_um : 0.0;

    const int n = static_cast<int>(positions.size());
    CouplingMatrix cm(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = min_image(positions[j].x_um - positions[i].x_um, lx);
            const double dy = min_image(positions[j].y_um - positions[i].y_um, ly);
            const double r = std::hypot(dx, dy);
            if (r < 1e-9 * spacing_um) {
                throw ConfigError("coupling_matrix: sites " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
            }
            const double q = spacing_um / r;
            cm.set(i, j, q * q * q);
        }
    }
    return cm;
}

CouplingMatrix coupling_matrix(const LatticeSpec& spec) {
    return coupling_matrix(build_lattice(spec), spec.spacing_um, spec.boundary, spec.rows, spec.cols);
}

double moment_of_inertia(const CouplingMatrix& cm, double J_MHz) {
    const int n = cm.n_sites();
    if (n < 2) throw ConfigError("moment_of_inertia: need at least two atoms");
    return 2.0 * J_MHz * cm.pair_sum() / (static_cast<double>(n) * (n - 1));
}

}  // namespace spinsq
