#pragma once

#include <Eigen/Dense>

#include "spinsq/operators.hpp"
#include "spinsq/state.hpp"

namespace spinsq {

struct KrylovParams {
    int max_dim = 30;       ///< Lanczos subspace size
    double step_us = 0.01;  ///< largest substep; halved while the residual is above tol
    double tol = 1e-10;     ///< local error target per substep
    int max_sites = 20;     ///< refuse larger systems (memory budget)

    void validate() const;
};

/// Bookkeeping from the last Krylov propagation, for diagnostics.
struct KrylovStats {
    int substeps = 0;
    int matvecs = 0;
    double max_residual = 0.0;
};

/// exp(-i 2 pi H t) v by Lanczos with full reorthogonalization. The subspace
/// grows until the a-posteriori residual of the substep drops below `tol`;
/// if `max_dim` is reached first the substep is halved. Throws
/// NumericalError when the substep collapses without meeting the target.
StateVector evolve(const Hamiltonian& h, const StateVector& v, double t_us,
                   const KrylovParams& p = {}, KrylovStats* stats = nullptr);

StateVector evolve(const HamiltonianSpec& h, const StateVector& v, double t_us,
                   const KrylovParams& p = {});

/// Dense 2^N x 2^N matrix built directly from Pauli matrix elements, without
/// going through the matrix-free action. Refuses N > 10.
Eigen::MatrixXcd dense_hamiltonian(const HamiltonianSpec& h);

/// Exact propagation through a cached eigendecomposition; the test oracle for
/// the Krylov engine.
class DenseOracle {
public:
    explicit DenseOracle(const HamiltonianSpec& h);

    StateVector evolve(const StateVector& v, double t_us) const;
    const Eigen::VectorXd& eigenvalues() const { return evals_; }

private:
    int n_ = 0;
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
};

StateVector evolve_dense_oracle(const HamiltonianSpec& h, const StateVector& v, double t_us);

}  // namespace spinsq
