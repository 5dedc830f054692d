#pragma once

#include <set>
#include <vector>

namespace spinsq {

enum class Boundary { open, periodic };

/// Square array of tweezer sites. Sites are numbered row-major over the full
/// grid; the indices listed in `holes` carry no atom.
struct LatticeSpec {
    int rows = 1;
    int cols = 1;
    double spacing_um = 15.0;
    Boundary boundary = Boundary::open;
    std::set<int> holes;

    int n_grid() const { return rows * cols; }
    int n_atoms() const { return n_grid() - static_cast<int>(holes.size()); }

    /// Throws ConfigError when the spec is inconsistent.
    void validate() const;
};

struct Position {
    double x_um = 0.0;
    double y_um = 0.0;
};

/// Positions of the occupied sites, row-major with holes compacted out.
std::vector<Position> build_lattice(const LatticeSpec& spec);

/// Dimensionless pair couplings w[i][j] = (a / r_ij)^3.
class CouplingMatrix {
public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(int n_sites);

    /// Every pair coupled with the same strength (all-to-all).
    static CouplingMatrix uniform(int n_sites, double value);

    int n_sites() const { return n_; }
    double operator()(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double value);

    /// Sum over i < j of w[i][j].
    double pair_sum() const;

private:
    int n_ = 0;
    std::vector<double> w_;
};

/// Periodic boundaries use the minimum-image distance on the rows x cols
/// torus; open boundaries the plain Euclidean distance. Throws ConfigError on
/// coincident positions.
CouplingMatrix coupling_matrix(const std::vector<Position>& positions, double spacing_um,
                               Boundary boundary = Boundary::open, int rows = 0, int cols = 0);

/// Convenience: build_lattice followed by coupling_matrix with the spec's
/// boundary condition.
CouplingMatrix coupling_matrix(const LatticeSpec& spec);

/// Rotor coefficient 1/(2I) = 2 J [N(N-1)]^-1 sum_{i<j} w_ij, in MHz.
double moment_of_inertia(const CouplingMatrix& cm, double J_MHz);

}  // namespace spinsq
