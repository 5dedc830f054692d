#include "spinsq/propagator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "spinsq/errors.hpp"

namespace spinsq {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double dot_real(std::span<const cplx> a, std::span<const cplx> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
    return s;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(std::span<const cplx> a) {
    double s = 0.0;
    for (const cplx& x : a) s += std::norm(x);
    return std::sqrt(s);
}

// exp(-i theta T) e_1 for the leading k x k block of a real symmetric
// tridiagonal matrix.
Eigen::VectorXcd tridiagonal_exp_e1(const std::vector<double>& alpha,
                                    const std::vector<double>& beta, int k, double theta) {
    Eigen::VectorXd diag(k);
    Eigen::VectorXd sub(std::max(k - 1, 1));
    for (int i = 0; i < k; ++i) diag(i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) sub(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(std::max(k - 1, 0)), Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd coeff(k);
    for (int i = 0; i < k; ++i) {
        coeff(i) = std::exp(cplx(0.0, -theta * es.eigenvalues()(i))) * q(0, i);
    }
    return q.cast<cplx>() * coeff;
}

}  // namespace

void KrylovParams::validate() const {
    if (max_dim < 2) throw ConfigError("krylov: max_dim must be >= 2");
    if (!(step_us > 0.0)) throw ConfigError("krylov: step_us must be > 0");
    if (!(tol > 0.0)) throw ConfigError("krylov: tol must be > 0");
}

StateVector evolve(const Hamiltonian& h, const StateVector& v, double t_us, const KrylovParams& p,
                   KrylovStats* stats) {
    p.validate();
    if (t_us < 0.0) throw std::invalid_argument("evolve: negative time");
    if (v.n_sites() != h.n_sites()) throw std::invalid_argument("evolve: dimension mismatch");
    if (h.n_sites() > p.max_sites) {
        throw ConfigError("evolve: " + std::to_string(h.n_sites()) + " sites exceeds the cap of " +
                          std::to_string(p.max_sites));
    }
    KrylovStats local;
    KrylovStats& st = stats ? *stats : local;
    st = {};

    StateVector cur = v;
    if (t_us == 0.0) return cur;

    const std::size_t d = v.dim();
    const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(p.max_dim), d));
    std::vector<std::vector<cplx>> basis;
    basis.reserve(static_cast<std::size_t>(m_max));
    std::vector<double> alpha, beta;
    std::vector<cplx> w(d);

    double remaining = t_us;
    while (remaining > 0.0) {
        double tau = std::min(p.step_us, remaining);
        const double nrm = cur.norm();

        basis.clear();
        alpha.clear();
        beta.clear();
        basis.emplace_back(cur.amplitudes().begin(), cur.amplitudes().end());
        for (cplx& x : basis[0]) x /= nrm;

        int k = 0;  // dimension of the subspace that will be used
        double residual = 0.0;
        bool converged = false;
        for (int j = 0; j < m_max; ++j) {
            h.apply(basis[static_cast<std::size_t>(j)], w);
            ++st.matvecs;
            const double a = dot_real(basis[static_cast<std::size_t>(j)], w);
            alpha.push_back(a);
            // full reorthogonalization, two passes
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : basis) {
                    const cplx c = dot(q, w);
                    for (std::size_t i = 0; i < d; ++i) w[i] -= c * q[i];
                }
            }
            const double b = norm2(w);
            k = j + 1;
            if (b <= 1e-13 * (std::abs(a) + 1.0)) {
                // invariant subspace: the projection is exact for any step
                residual = 0.0;
                tau = remaining;
                converged = true;
                break;
            }
            const Eigen::VectorXcd y = tridiagonal_exp_e1(alpha, beta, k, two_pi * tau);
            residual = b * std::abs(y(k - 1));
            if (residual <= p.tol) {
                converged = true;
                break;
            }
            beta.push_back(b);
            if (j + 1 < m_max) {
                basis.emplace_back(w);
                for (cplx& x : basis.back()) x /= b;
            }
        }
        if (!converged) {
            const double b = beta.back();
            while (residual > p.tol) {
                tau *= 0.5;
                if (tau < 1e-9 * p.step_us) {
                    std::ostringstream msg;
                    msg << "evolve: Krylov residual " << residual << " above tolerance " << p.tol
                        << " at substep " << tau << " us";
                    throw NumericalError(msg.str());
                }
                const Eigen::VectorXcd y = tridiagonal_exp_e1(alpha, beta, k, two_pi * tau);
                residual = b * std::abs(y(k - 1));
            }
        }

        const Eigen::VectorXcd y = tridiagonal_exp_e1(alpha, beta, k, two_pi * tau);
        auto amps = cur.amplitudes();
        std::fill(amps.begin(), amps.end(), cplx(0.0));
        for (int j = 0; j < k; ++j) {
            const cplx c = y(j) * nrm;
            const auto& q = basis[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < d; ++i) amps[i] += c * q[i];
        }
        cur.normalize();

        st.max_residual = std::max(st.max_residual, residual);
        ++st.substeps;
        remaining -= tau;
        if (remaining < 1e-14 * t_us) remaining = 0.0;
    }
    return cur;
}

StateVector evolve(const HamiltonianSpec& h, const StateVector& v, double t_us, const KrylovParams& p) {
    return evolve(Hamiltonian(h), v, t_us, p);
}

Eigen::MatrixXcd dense_hamiltonian(const HamiltonianSpec& h) {
    const int n = h.n_sites();
    if (n > 10) throw ConfigError("dense oracle: refusing N = " + std::to_string(n) + " > 10");
    const Eigen::Index d = Eigen::Index{1} << n;
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(d, d);

    if (h.kind == HamiltonianKind::OAT) {
        for (Eigen::Index s = 0; s < d; ++s) {
            const double m = std::popcount(static_cast<unsigned long>(s)) - 0.5 * n;
            mat(s, s) = h.chi_MHz * m * m;
        }
        return mat;
    }

    // Pauli matrices in the (bit = 0 -> down, bit = 1 -> up) local basis:
    // sigma[a][out_bit][in_bit].
    const cplx I(0.0, 1.0);
    const cplx sigma[3][2][2] = {
        {{0.0, 1.0}, {1.0, 0.0}},  // x
        {{0.0, I}, {-I, 0.0}},     // y: <dn|sy|up> = i, <up|sy|dn> = -i
        {{-1.0, 0.0}, {0.0, 1.0}}, // z
    };
    double c[3] = {0.0, 0.0, 0.0};
    switch (h.kind) {
        case HamiltonianKind::XY:
            c[0] = c[1] = -0.5 * h.J_MHz;
            break;
        case HamiltonianKind::Heisenberg:
            c[0] = c[1] = c[2] = -2.0 * h.J_MHz / 3.0;
            break;
        case HamiltonianKind::ZZ:
            c[2] = 1.0;
            break;
        case HamiltonianKind::OAT:
            break;
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double wij = h.cm(i, j);
            if (wij == 0.0) continue;
            for (Eigen::Index s = 0; s < d; ++s) {
                const int bi = static_cast<int>((s >> i) & 1);
                const int bj = static_cast<int>((s >> j) & 1);
                for (int oi = 0; oi < 2; ++oi) {
                    for (int oj = 0; oj < 2; ++oj) {
                        cplx elem = 0.0;
                        for (int a = 0; a < 3; ++a) elem += c[a] * sigma[a][oi][bi] * sigma[a][oj][bj];
                        if (elem == 0.0) continue;
                        Eigen::Index t = s;
                        t = (t & ~(Eigen::Index{1} << i)) | (Eigen::Index{oi} << i);
                        t = (t & ~(Eigen::Index{1} << j)) | (Eigen::Index{oj} << j);
                        mat(t, s) += wij * elem;
                    }
                }
            }
        }
    }
    return mat;
}

DenseOracle::DenseOracle(const HamiltonianSpec& h) : n_(h.n_sites()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_hamiltonian(h));
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
}

StateVector DenseOracle::evolve(const StateVector& v, double t_us) const {
    if (v.n_sites() != n_) throw std::invalid_argument("DenseOracle: dimension mismatch");
    const Eigen::Index d = evals_.size();
    Eigen::Map<const Eigen::VectorXcd> in(v.amplitudes().data(), d);
    Eigen::VectorXcd coeff = evecs_.adjoint() * in;
    for (Eigen::Index k = 0; k < d; ++k) coeff(k) *= std::exp(cplx(0.0, -two_pi * evals_(k) * t_us));
    const Eigen::VectorXcd out = evecs_ * coeff;
    return StateVector(n_, std::vector<cplx>(out.data(), out.data() + d));
}

StateVector evolve_dense_oracle(const HamiltonianSpec& h, const StateVector& v, double t_us) {
    return DenseOracle(h).evolve(v, t_us);
}

}  // namespace spinsq
