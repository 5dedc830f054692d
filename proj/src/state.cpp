#include "spinsq/state.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace spinsq {

StateVector::StateVector(int n_sites) : n_sites_(n_sites), amps_(std::size_t{1} << n_sites) {}

StateVector::StateVector(int n_sites, std::vector<cplx> amplitudes)
    : n_sites_(n_sites), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t{1} << n_sites)) {
        throw std::invalid_argument("StateVector: amplitude count is not 2^N");
    }
}

StateVector StateVector::all_up(int n_sites) {
    StateVector v(n_sites);
    v.amps_.back() = 1.0;
    return v;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize zero vector");
    for (cplx& a : amps_) a /= n;
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

}  // namespace spinsq
