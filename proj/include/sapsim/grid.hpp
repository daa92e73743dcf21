#pragma once

#include <complex>
#include <vector>

namespace sapsim {

using cplx = std::complex<double>;

/// Uniform 1D position grid with its discrete-Fourier momentum grid.
/// Natural units hbar = m = 1; lengths in units of the left-trap ground
/// state width alpha. Endpoint-exclusive: x_i = x_min + i*dx, dx = (x_max-x_min)/n.
class SpatialGrid {
  public:
    SpatialGrid(int n_points, double x_min, double x_max);

    int n() const { return n_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }

    double x(int i) const { return x_min_ + i * dx_; }
    /// FFT-ordered wavenumber: positive frequencies first, then negative.
    double k(int i) const;

    bool operator==(const SpatialGrid& o) const {
        return n_ == o.n_ && x_min_ == o.x_min_ && x_max_ == o.x_max_;
    }

  private:
    int n_;
    double x_min_, x_max_, dx_;
};

/// Complex field on a SpatialGrid; units alpha^(-1/2).
struct Wavefunction {
    SpatialGrid grid;
    std::vector<cplx> amp;

    explicit Wavefunction(const SpatialGrid& g) : grid(g), amp(g.n(), cplx{0.0, 0.0}) {}
};

/// Normalized ground-state Gaussian exp(-(x-center)^2 / (2 width^2)).
Wavefunction make_gaussian(const SpatialGrid& grid, double center, double width);

/// Discrete norm integral of |psi|^2 dx.
double norm(const Wavefunction& psi);

/// Discrete <a|b> with the conjugate on the first argument.
cplx overlap(const Wavefunction& a, const Wavefunction& b);

/// Probability mass within `margin` of either grid edge.
double boundary_mass(const Wavefunction& psi, double margin);

/// Rescale to unit norm (no-op guard against zero fields).
void normalize(Wavefunction& psi);

}  // namespace sapsim
