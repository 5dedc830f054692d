#include "spinsq/operators.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "spinsq/errors.hpp"

namespace spinsq {

HamiltonianSpec HamiltonianSpec::xy(CouplingMatrix cm, double J_MHz) {
    return {HamiltonianKind::XY, J_MHz, std::move(cm), 0.0, 0};
}

HamiltonianSpec HamiltonianSpec::heisenberg(CouplingMatrix cm, double J_MHz) {
    return {HamiltonianKind::Heisenberg, J_MHz, std::move(cm), 0.0, 0};
}

HamiltonianSpec HamiltonianSpec::zz(CouplingMatrix cm) {
    return {HamiltonianKind::ZZ, 0.0, std::move(cm), 0.0, 0};
}

HamiltonianSpec HamiltonianSpec::oat(int n_sites, double chi_MHz) {
    return {HamiltonianKind::OAT, 0.0, CouplingMatrix{}, chi_MHz, n_sites};
}

int HamiltonianSpec::n_sites() const {
    return kind == HamiltonianKind::OAT ? oat_sites : cm.n_sites();
}

Hamiltonian::Hamiltonian(int n_sites) : n_(n_sites) {
    if (n_sites < 0 || n_sites > 30) throw ConfigError("Hamiltonian: unsupported number of sites");
}

Hamiltonian::Hamiltonian(const HamiltonianSpec& spec) : Hamiltonian(spec.n_sites()) {
    const std::size_t d = dim();
    const int n = n_;

    // zz_coeff multiplies sz_i sz_j, ff_coeff multiplies (s+s- + s-s+); both per unit w_ij.
    double zz_coeff = 0.0;
    double ff_coeff = 0.0;
    switch (spec.kind) {
        case HamiltonianKind::XY:
            ff_coeff = -spec.J_MHz;  // -(J/2)(xx + yy) = -J (s+s- + s-s+)
            break;
        case HamiltonianKind::Heisenberg:
            zz_coeff = -2.0 * spec.J_MHz / 3.0;
            ff_coeff = -4.0 * spec.J_MHz / 3.0;
            break;
        case HamiltonianKind::ZZ:
            zz_coeff = 1.0;
            break;
        case HamiltonianKind::OAT: {
            diag_.resize(d);
            for (std::size_t s = 0; s < d; ++s) {
                const double m = std::popcount(s) - 0.5 * n;
                diag_[s] = spec.chi_MHz * m * m;
            }
            return;
        }
    }

    if (zz_coeff != 0.0) diag_.assign(d, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double w = spec.cm(i, j);
            if (w == 0.0) continue;
            const std::uint64_t mask = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
            if (ff_coeff != 0.0) {
                pairs_.push_back({mask, ff_coeff * w});
                if (ff_table_.empty()) ff_table_.assign(static_cast<std::size_t>(n) * n, 0.0);
                ff_table_[static_cast<std::size_t>(i) * n + j] = ff_coeff * w;
                ff_table_[static_cast<std::size_t>(j) * n + i] = ff_coeff * w;
            }
            if (zz_coeff != 0.0) {
                const double c = zz_coeff * w;
                for (std::size_t s = 0; s < d; ++s) {
                    const bool aligned = ((s >> i) & 1U) == ((s >> j) & 1U);
                    diag_[s] += aligned ? c : -c;
                }
            }
        }
    }
}

void Hamiltonian::set_drive(double rabi_MHz, double phase) {
    drive_ = 0.5 * rabi_MHz * std::exp(cplx(0.0, -phase));
}

void Hamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t d = dim();
    if (in.size() != d || out.size() != d) {
        throw std::invalid_argument("Hamiltonian::apply: dimension mismatch");
    }
    const bool has_diag = !diag_.empty();
    const bool has_drive = drive_ != 0.0;
    const cplx drive_dn = std::conj(drive_);
    const bool has_ff = !ff_table_.empty();
    const std::uint64_t all = d - 1;
    for (std::size_t s = 0; s < d; ++s) {
        cplx acc = has_diag ? diag_[s] * in[s] : cplx(0.0);
        if (has_ff) {
            // only pairs with one spin up and one down are connected
            for (std::uint64_t up = s; up != 0; up &= up - 1) {
                const int i = std::countr_zero(up);
                const double* row = &ff_table_[static_cast<std::size_t>(i) * n_];
                const std::size_t si = s ^ (std::size_t{1} << i);
                for (std::uint64_t dn = ~s & all; dn != 0; dn &= dn - 1) {
                    const int j = std::countr_zero(dn);
                    acc += row[j] * in[si ^ (std::size_t{1} << j)];
                }
            }
        }
        if (has_drive) {
            for (int i = 0; i < n_; ++i) {
                const std::size_t bit = std::size_t{1} << i;
                acc += ((s & bit) ? drive_ : drive_dn) * in[s ^ bit];
            }
        }
        out[s] = acc;
    }
}

StateVector Hamiltonian::apply(const StateVector& v) const {
    if (v.n_sites() != n_) throw std::invalid_argument("Hamiltonian::apply: dimension mismatch");
    StateVector out(n_);
    apply(v.amplitudes(), out.amplitudes());
    return out;
}

StateVector apply_hamiltonian(const HamiltonianSpec& h, const StateVector& v) {
    if (v.n_sites() != h.n_sites()) {
        throw std::invalid_argument("apply_hamiltonian: state has " + std::to_string(v.n_sites()) +
                                    " sites, Hamiltonian " + std::to_string(h.n_sites()));
    }
    return Hamiltonian(h).apply(v);
}

StateVector apply_collective(Axis axis, const StateVector& v) {
    const int n = v.n_sites();
    const std::size_t d = v.dim();
    StateVector out(n);
    for (std::size_t s = 0; s < d; ++s) {
        cplx acc = 0.0;
        switch (axis) {
            case Axis::x:
                for (int i = 0; i < n; ++i) acc += v[s ^ (std::size_t{1} << i)];
                break;
            case Axis::y:
                // sy|up> = i|dn>, sy|dn> = -i|up>
                for (int i = 0; i < n; ++i) {
                    const std::size_t bit = std::size_t{1} << i;
                    acc += (s & bit) ? cplx(0.0, -1.0) * v[s ^ bit] : cplx(0.0, 1.0) * v[s ^ bit];
                }
                break;
            case Axis::z:
                acc = (2.0 * std::popcount(s) - n) * v[s];
                break;
        }
        out[s] = 0.5 * acc;
    }
    return out;
}

double CollectiveMoments::var(Axis a) const {
    const auto i = static_cast<std::size_t>(a);
    return second[i][i] - mean[i] * mean[i];
}

double CollectiveMoments::cov(Axis a, Axis b) const {
    const auto i = static_cast<std::size_t>(a);
    const auto j = static_cast<std::size_t>(b);
    return second[i][j] - mean[i] * mean[j];
}

CollectiveMoments collective_expectations(const StateVector& v) {
    if (std::abs(v.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("collective_expectations: state is not normalized");
    }
    const std::array<StateVector, 3> jv = {apply_collective(Axis::x, v),
                                           apply_collective(Axis::y, v),
                                           apply_collective(Axis::z, v)};
    CollectiveMoments m;
    m.n_sites = v.n_sites();
    for (std::size_t a = 0; a < 3; ++a) {
        m.mean[a] = inner(v, jv[a]).real();
        for (std::size_t b = a; b < 3; ++b) {
            const double s = inner(jv[a], jv[b]).real();
            m.second[a][b] = s;
            m.second[b][a] = s;
        }
    }
    return m;
}

void rotate_global(StateVector& v, std::array<double, 3> axis, double angle) {
    const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (len == 0.0) throw std::invalid_argument("rotate_global: zero axis");
    const double nx = axis[0] / len, ny = axis[1] / len, nz = axis[2] / len;
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const cplx mi_s(0.0, -s);
    // U = c - i s (n . sigma) in the (up, down) basis
    const cplx u00 = c + mi_s * nz;
    const cplx u01 = mi_s * cplx(nx, -ny);
    const cplx u10 = mi_s * cplx(nx, ny);
    const cplx u11 = c - mi_s * nz;

    const std::size_t d = v.dim();
    for (int i = 0; i < v.n_sites(); ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t s0 = 0; s0 < d; ++s0) {
            if (s0 & bit) continue;
            const cplx dn = v[s0];
            const cplx up = v[s0 | bit];
            v[s0 | bit] = u00 * up + u01 * dn;
            v[s0] = u10 * up + u11 * dn;
        }
    }
}

}  // namespace spinsq
