#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "spinsq/lattice.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/operators.hpp"
#include "spinsq/rng.hpp"
#include "spinsq/state.hpp"

namespace testsupport {

using spinsq::cplx;

/// Haar-ish random normalized state from a seed.
inline spinsq::StateVector random_state(int n, std::uint64_t seed) {
    spinsq::CounterRng rng(seed, 77);
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto& x : a) x = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    spinsq::StateVector v(n, a);
    v.normalize();
    return v;
}

inline spinsq::LatticeSpec square(int rows, int cols) { return {rows, cols, 15.0, spinsq::Boundary::open, {}}; }

/// Independent collective-moment oracle: explicit per-basis-state sums of
/// Pauli strings, no shared code with collective_expectations.
struct BruteMoments {
    double mean[3]{};
    double second[3][3]{};
};

inline BruteMoments brute_moments(const spinsq::StateVector& v) {
    const int n = v.n_sites();
    const std::size_t d = v.dim();
    // J_a |s> expressed as a list of (target, coefficient) pairs
    auto apply_j = [&](int a, const std::vector<cplx>& in) {
        std::vector<cplx> out(d, 0.0);
        for (std::size_t s = 0; s < d; ++s) {
            for (int i = 0; i < n; ++i) {
                const bool up = (s >> i) & 1U;
                const std::size_t f = s ^ (std::size_t{1} << i);
                if (a == 0) out[f] += 0.5 * in[s];
                if (a == 1) out[f] += 0.5 * (up ? cplx(0, 1) : cplx(0, -1)) * in[s];
                if (a == 2) out[s] += 0.5 * (up ? 1.0 : -1.0) * in[s];
            }
        }
        return out;
    };
    std::vector<cplx> psi(v.amplitudes().begin(), v.amplitudes().end());
    std::vector<cplx> j[3] = {apply_j(0, psi), apply_j(1, psi), apply_j(2, psi)};
    auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += std::conj(a[k]) * b[k];
        return s;
    };
    BruteMoments m;
    for (int a = 0; a < 3; ++a) {
        m.mean[a] = dot(psi, j[a]).real();
        for (int b = 0; b < 3; ++b) m.second[a][b] = dot(j[a], j[b]).real();
    }
    return m;
}

inline double max_abs_diff(const spinsq::StateVector& a, const spinsq::StateVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testsupport
