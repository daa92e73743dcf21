#include "sapsim/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sapsim/errors.hpp"

namespace sapsim {

namespace {

// Count of eigenvalues of the symmetric tridiagonal (diag, off) below x,
// via the Sturm sequence of the LDL^T pivots.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    const double tiny = 1e-300;
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (size_t i = 1; i < diag.size(); ++i) {
        if (std::abs(q) < tiny) q = (q < 0.0 ? -tiny : tiny);
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th (0-based) eigenvalue by bisection.
double bisect_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off, int k) {
    // Gershgorin bounds
    double lo = diag[0], hi = diag[0];
    for (size_t i = 0; i < diag.size(); ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < diag.size()) r += std::abs(off[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(diag, off, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Solve (T - shift) u = rhs for tridiagonal T, Thomas algorithm with a
// stabilizing floor on the pivots.
void shifted_solve(const std::vector<double>& diag, const std::vector<double>& off, double shift,
                   std::vector<double>& u) {
    const size_t n = diag.size();
    std::vector<double> c(n), d(n);
    double piv = diag[0] - shift;
    if (std::abs(piv) < 1e-12) piv = (piv < 0 ? -1e-12 : 1e-12);
    c[0] = off.empty() ? 0.0 : off[0] / piv;
    d[0] = u[0] / piv;
    for (size_t i = 1; i < n; ++i) {
        piv = diag[i] - shift - off[i - 1] * c[i - 1];
        if (std::abs(piv) < 1e-12) piv = (piv < 0 ? -1e-12 : 1e-12);
        c[i] = (i + 1 < n) ? off[i] / piv : 0.0;
        d[i] = (u[i] - off[i - 1] * d[i - 1]) / piv;
    }
    u[n - 1] = d[n - 1];
    for (int i = static_cast<int>(n) - 2; i >= 0; --i) u[i] = d[i] - c[i] * u[i + 1];
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
        double dot = 0.0;
        for (size_t i = 0; i < v.size(); ++i) dot += v[i] * b[i];
        for (size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
    }
}

void unit_scale(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s > 0.0)
        for (double& x : v) x /= s;
}

struct TridiagEigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;  // unit 2-norm
};

TridiagEigen lowest_pairs(const std::vector<double>& diag, const std::vector<double>& off,
                          int n_states, bool want_vectors) {
    TridiagEigen out;
    const size_t n = diag.size();
    for (int k = 0; k < n_states; ++k) {
        const double lam = bisect_eigenvalue(diag, off, k);
        out.values.push_back(lam);
        if (!want_vectors) continue;
        std::vector<double> v(n);
        for (size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(0.7 * (i + 1) * (k + 1));
        orthogonalize(v, out.vectors);
        unit_scale(v);
        for (int it = 0; it < 4; ++it) {
            shifted_solve(diag, off, lam + 1e-11, v);
            orthogonalize(v, out.vectors);
            unit_scale(v);
        }
        // sign convention: largest-magnitude entry positive
        size_t imax = 0;
        for (size_t i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        if (v[imax] < 0.0)
            for (double& x : v) x = -x;
        out.vectors.push_back(std::move(v));
    }
    return out;
}

void build_tridiag(std::span<const double> v, double dx, std::vector<double>& diag,
                   std::vector<double>& off) {
    const size_t n = v.size();
    const double inv2 = 1.0 / (dx * dx);
    diag.resize(n);
    off.assign(n - 1, -0.5 * inv2);
    for (size_t i = 0; i < n; ++i) diag[i] = inv2 + v[i];
}

}  // namespace

std::vector<double> lowest_eigenvalues(std::span<const double> x, std::span<const double> v,
                                       int n_states) {
    if (x.size() != v.size() || x.size() < 8) throw ConfigError("bad sampling for eigenvalues");
    if (n_states < 1) throw ConfigError("n_states must be >= 1");
    std::vector<double> diag, off;
    build_tridiag(v, x[1] - x[0], diag, off);
    return lowest_pairs(diag, off, n_states, false).values;
}

EigenResult window_eigenpairs(const SpatialGrid& grid, std::span<const double> potential,
                              int i_lo, int i_hi, int n_states) {
    if (n_states < 1) throw ConfigError("n_states must be >= 1");
    if (i_lo < 0 || i_hi > grid.n() || i_hi - i_lo < 8)
        throw ConfigError("bad diagonalization window");
    const int m = i_hi - i_lo;
    std::vector<double> diag, off;
    build_tridiag(potential.subspan(i_lo, m), grid.dx(), diag, off);
    TridiagEigen te = lowest_pairs(diag, off, n_states, true);

    EigenResult out;
    out.energies = te.values;
    const double inv_sqrt_dx = 1.0 / std::sqrt(grid.dx());
    for (auto& v : te.vectors) {
        Wavefunction psi(grid);
        for (int i = 0; i < m; ++i) psi.amp[i_lo + i] = v[i] * inv_sqrt_dx;
        // edge mass check: two points at each window end
        double edge = 0.0;
        for (int i : {0, 1, m - 2, m - 1}) edge += v[i] * v[i];
        if (edge > 1e-6) out.boundary_warning = true;
        out.states.push_back(std::move(psi));
    }
    return out;
}

EigenResult ground_states_by_diagonalization(const SpatialGrid& grid,
                                             std::span<const double> potential, int n_states) {
    return window_eigenpairs(grid, potential, 0, grid.n(), n_states);
}

}  // namespace sapsim
