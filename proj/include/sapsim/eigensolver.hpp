#pragma once

#include <span>
#include <vector>

#include "sapsim/grid.hpp"

namespace sapsim {

struct EigenResult {
    std::vector<double> energies;          // ascending
    std::vector<Wavefunction> states;      // grid-normalized, real up to sign
    bool boundary_warning = false;         // eigenfunction mass at the window edge > 1e-6
};

/// Lowest n_states eigenpairs of the 3-point finite-difference Hamiltonian
/// -psi''/2 + V psi with Dirichlet ends; Sturm bisection for eigenvalues,
/// inverse iteration for eigenvectors.
EigenResult ground_states_by_diagonalization(const SpatialGrid& grid,
                                             std::span<const double> potential,
                                             int n_states);

/// Same solve restricted to grid indices [i_lo, i_hi); the returned states
/// live on the full grid and vanish outside the window.
EigenResult window_eigenpairs(const SpatialGrid& grid, std::span<const double> potential,
                              int i_lo, int i_hi, int n_states);

/// Lowest n eigenvalues of a free-standing (x, V) sampling; used by the
/// resonance calibration where no full simulation grid exists yet.
std::vector<double> lowest_eigenvalues(std::span<const double> x, std::span<const double> v,
                                       int n_states);

}  // namespace sapsim
