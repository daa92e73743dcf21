#pragma once

#include <array>
#include <complex>
#include <vector>

#include "sapsim/trap_geometry.hpp"

namespace sapsim {

/// Which spatial superposition of the double well the protocol targets.
/// symmetric: omega_R > omega (the lower-energy even combination);
/// antisymmetric: omega_R < omega (the higher-energy odd combination).
enum class Branch {
    symmetric,
    antisymmetric,
};

/// Dimensionless tunneling splitting Omega/omega of two equal harmonic
/// wells at half-separation d (in ground-state-width units). Valid d > 1.
double tunneling_rate(double d);

/// Closed-form resonant double-well frequency omega / (1 -+ ... ):
/// antisymmetric -> omega/(1 + f), symmetric -> omega/(1 - f), f = tunneling_rate(d_R).
double resonant_omega_R(double omega, double d_R, Branch branch);

/// Resonant omega_R from exact level matching: root of
/// E_branch(omega_R) = omega/2 on the finite-difference double-well spectrum.
/// The closed form above is asymptotic; this is the value the protocol uses.
double calibrated_omega_R(double omega, double d_R, Branch branch);

/// Tunneling frequencies (splitting convention) and the trap detuning.
struct CouplingSet {
    double omega_lm = 0.0;  // left <-> middle
    double omega_mr = 0.0;  // middle <-> near right well
    double omega_r = 0.0;   // intra-double-well, fixed
    double detuning = 0.0;  // omega - omega_R
};

using Matrix4c = std::array<std::array<cplx, 4>, 4>;

/// Reduced Hamiltonian over {|0>_L, |0>_M, |0>_RL, |0>_RR} (units hbar*omega).
/// Couplings enter as -Omega/2 (Omega are level splittings); the right-pair
/// diagonal carries -detuning/2, the energy offset of the asymptotic right
/// states relative to the left/middle ground level.
Matrix4c hamiltonian(const CouplingSet& c);

struct DarkState {
    double theta = 0.0;
    Branch branch = Branch::symmetric;
    std::array<cplx, 4> amplitudes{};
};

/// Zero-energy transfer state cos(theta)|0>_L - sin(theta)|0>^{+-}_R with
/// tan(theta) = sqrt(2) Omega_LM / Omega_MR; the branch picks the parity of
/// the right-pair combination the protocol rides into.
DarkState dark_state(double omega_lm, double omega_mr, Branch branch);

/// ||H * Phi_branch||; < 1e-12 when the couplings satisfy the resonance
/// condition omega - omega_R = +-Omega_R (+ for antisymmetric).
double dark_state_nullity(const CouplingSet& c, Branch branch);

/// Couplings at time t from the trap geometry via the closed-form rate.
CouplingSet couplings_from_geometry(const TrapLayout& layout, const MotionSchedule& s, double t);

struct FourLevelState {
    std::array<cplx, 4> c{};
    double time = 0.0;

    double norm_sq() const;
};

/// Fixed-step RK4 integration of i dc/dt = H(t) c; samples every
/// record_stride steps plus the final state. Norm drift > 1e-6 aborts.
std::vector<FourLevelState> integrate_four_level(const FourLevelState& initial,
                                                 const TrapLayout& layout,
                                                 const MotionSchedule& s, double dt,
                                                 double t_final, int record_stride = 1);

}  // namespace sapsim
