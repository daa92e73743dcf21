#include "sapsim/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sapsim/errors.hpp"

namespace sapsim {

SpatialGrid::SpatialGrid(int n_points, double x_min, double x_max)
    : n_(n_points), x_min_(x_min), x_max_(x_max) {
    if (n_points < 8) throw ConfigError("grid needs at least 8 points");
    if (!(x_max > x_min)) throw ConfigError("grid requires x_max > x_min");
    dx_ = (x_max_ - x_min_) / n_;
}

double SpatialGrid::k(int i) const {
    const double dk = 2.0 * std::numbers::pi / (n_ * dx_);
    return (i < n_ / 2 ? i : i - n_) * dk;
}

Wavefunction make_gaussian(const SpatialGrid& grid, double center, double width) {
    if (width < 4.0 * grid.dx()) {
        std::ostringstream os;
        os << "gaussian width " << width << " unresolvable: needs width >= 4*dx = "
           << 4.0 * grid.dx();
        throw ConfigError(os.str());
    }
    if (center - 5.0 * width < grid.x_min() || center + 5.0 * width > grid.x_max()) {
        std::ostringstream os;
        os << "gaussian support exceeds grid: center " << center << " +- 5*width " << 5.0 * width
           << " outside [" << grid.x_min() << ", " << grid.x_max() << "]";
        throw ConfigError(os.str());
    }
    Wavefunction psi(grid);
    for (int i = 0; i < grid.n(); ++i) {
        const double u = (grid.x(i) - center) / width;
        psi.amp[i] = std::exp(-0.5 * u * u);
    }
    normalize(psi);
    return psi;
}

double norm(const Wavefunction& psi) {
    double s = 0.0;
    for (const cplx& a : psi.amp) s += std::norm(a);
    return s * psi.grid.dx();
}

cplx overlap(const Wavefunction& a, const Wavefunction& b) {
    if (!(a.grid == b.grid)) throw ConfigError("overlap requires identical grids");
    cplx s{0.0, 0.0};
    for (int i = 0; i < a.grid.n(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s * a.grid.dx();
}

double boundary_mass(const Wavefunction& psi, double margin) {
    const SpatialGrid& g = psi.grid;
    double s = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.x(i);
        if (x < g.x_min() + margin || x > g.x_max() - margin) s += std::norm(psi.amp[i]);
    }
    return s * g.dx();
}

void normalize(Wavefunction& psi) {
    const double n = norm(psi);
    if (n <= 0.0) return;
    const double scale = 1.0 / std::sqrt(n);
    for (cplx& a : psi.amp) a *= scale;
}

}  // namespace sapsim
