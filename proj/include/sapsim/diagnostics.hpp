#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sapsim/eigensolver.hpp"
#include "sapsim/grid.hpp"
#include "sapsim/trap_geometry.hpp"

namespace sapsim {

/// Cut positions splitting the axis into left-trap, middle-trap and the two
/// double-well halves. Cuts sit on the inter-well potential maxima: the
/// midpoint for equal-frequency pairs, the parabola crossing for the mixed
/// middle/near-well pair.
struct RegionPartition {
    double cut_lm = 0.0;  // left | middle
    double cut_mr = 0.0;  // middle | double-well-left
    double cut_rr = 0.0;  // double-well-left | double-well-right

    void validate(const SpatialGrid& grid) const;
};

RegionPartition region_partition_at(double t, const TrapLayout& layout, const MotionSchedule& s);

/// Probabilities (rho_L, rho_M, rho_RL, rho_RR); sums to norm(psi).
std::array<double, 4> region_populations(const Wavefunction& psi, const RegionPartition& p);

struct SymmetryResult {
    double s_r = 0.0;
    double s_i = 0.0;
    double re_weight = 0.0;  // sum |Re psi| over the window
    double im_weight = 0.0;
    bool re_degenerate = false;  // component below the zero-denominator floor
    bool im_degenerate = false;
};

/// Symmetry functionals over grid points with x > window_min:
/// S = sum(component) / sum(|component|); a vanishing denominator reports 0.
SymmetryResult symmetry_functions(const Wavefunction& psi, double window_min);

/// |<e0|psi>|^2 and |<e1|psi>|^2 against the two lowest eigenstates of the
/// potential restricted to the double-well window (x > partition.cut_mr).
std::array<double, 2> eigenstate_fidelities(const Wavefunction& psi,
                                            std::span<const double> potential,
                                            const RegionPartition& partition);

struct DiagnosticsRecord {
    double t = 0.0;
    double rho_l = 0.0, rho_m = 0.0, rho_rl = 0.0, rho_rr = 0.0;
    double s_r = 0.0, s_i = 0.0;
    double fid_sym = 0.0, fid_antisym = 0.0;
    double boundary_leak = 0.0;
};

std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

/// Max over hold-phase records of (rho_RL - rho_RR). Requires records
/// covering at least 3 tunneling periods 2*pi/omega_r past hold_start.
double imbalance_amplitude(const std::vector<DiagnosticsRecord>& records, double hold_start,
                           double omega_r);

}  // namespace sapsim
