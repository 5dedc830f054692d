#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spinsq {

using cplx = std::complex<double>;

/// Amplitudes over the 2^N computational basis. Bit i of the index set means
/// site i is |up>, and sigma^z |up> = +|up>.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int n_sites);
    StateVector(int n_sites, std::vector<cplx> amplitudes);

    /// |up ... up>
    static StateVector all_up(int n_sites);

    int n_sites() const { return n_sites_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    cplx& operator[](std::size_t i) { return amps_[i]; }

    double norm() const;
    void normalize();

private:
    int n_sites_ = 0;
    std::vector<cplx> amps_;
};

cplx inner(const StateVector& a, const StateVector& b);  // <a|b>
/// |<a|b>|^2 for normalized inputs.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace spinsq
