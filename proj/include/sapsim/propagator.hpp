#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sapsim/grid.hpp"

namespace sapsim {

struct PropagationSettings {
    double dt = 0.01;        // time step, units 1/omega
    int record_stride = 25;  // steps between observer calls

    void validate(double max_frequency) const;
};

/// Fills V(x_i, t) for all grid points.
using PotentialOfTime = std::function<void(double t, std::span<double> v_out)>;

/// Called every record_stride steps and on the final step.
using Observer = std::function<void(long step, double t, const Wavefunction&)>;

/// Norm-preserving Strang split-operator propagator with a spectral
/// kinetic factor. One instance owns its FFT plans; create one per thread.
class SplitOperator {
  public:
    explicit SplitOperator(const SpatialGrid& grid);
    ~SplitOperator();

    SplitOperator(const SplitOperator&) = delete;
    SplitOperator& operator=(const SplitOperator&) = delete;

    /// One Strang step exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2); the same
    /// potential sample is used for both half factors.
    void step(Wavefunction& psi, std::span<const double> potential, double dt);

    /// Repeated steps with the potential evaluated at each step's midpoint
    /// time t0 + (s + 1/2) dt. Observers fire every record_stride steps and
    /// at the final step. Returns the end time.
    double evolve(Wavefunction& psi, const PotentialOfTime& potential, double t0,
                  double t_final, const PropagationSettings& s,
                  const std::vector<Observer>& observers = {});

    /// Same loop with a frozen potential (caches the half-step phase).
    double evolve_static(Wavefunction& psi, std::span<const double> potential, double t0,
                         double t_final, const PropagationSettings& s,
                         const std::vector<Observer>& observers = {});

    const SpatialGrid& grid() const { return grid_; }

  private:
    void kinetic_full_step(Wavefunction& psi, double dt);
    void apply_phase(Wavefunction& psi, std::span<const cplx> phase) const;
    void build_half_phase(std::span<const double> potential, double dt, std::span<cplx> out) const;

    SpatialGrid grid_;
    void* plan_fwd_;
    void* plan_bwd_;
    std::vector<cplx> fft_buf_;
    std::vector<cplx> kin_phase_;
    double kin_dt_ = 0.0;
    std::vector<cplx> half_phase_;
    std::vector<double> v_buf_;
};

/// <psi|H|psi> with spectral kinetic energy and the given potential.
double energy_expectation(const Wavefunction& psi, std::span<const double> potential);

/// Amplitude width sqrt(2 (<x^2> - <x>^2)); equals w for exp(-x^2/(2 w^2)).
double packet_width(const Wavefunction& psi);

/// <x>.
double packet_center(const Wavefunction& psi);

}  // namespace sapsim
