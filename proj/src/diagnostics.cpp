#include "sapsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "sapsim/errors.hpp"

namespace sapsim {

void RegionPartition::validate(const SpatialGrid& grid) const {
    if (!(cut_lm < cut_mr && cut_mr < cut_rr))
        throw ConfigError("region cuts must be strictly increasing");
    if (cut_lm <= grid.x_min() || cut_rr >= grid.x_max())
        throw ConfigError("region cuts must lie inside the grid");
}

RegionPartition region_partition_at(double t, const TrapLayout& layout, const MotionSchedule& s) {
    const TrapCenters c = centers_at(t, layout, s);
    RegionPartition p;
    p.cut_lm = 0.5 * (c.x_l + c.x_m);  // equal frequencies: crossing = midpoint
    // mixed pair: crossing of the omega and omega_R parabolas
    const double r = layout.omega_R / layout.omega;
    p.cut_mr = c.x_m + (c.x_rl - c.x_m) * r / (1.0 + r);
    p.cut_rr = 0.5 * (c.x_rl + c.x_rr);
    return p;
}

std::array<double, 4> region_populations(const Wavefunction& psi, const RegionPartition& p) {
    p.validate(psi.grid);
    const SpatialGrid& g = psi.grid;
    // each point owns the cell [x - dx/2, x + dx/2); a cut inside a cell
    // splits that point's mass linearly, removing the O(dx) boundary bias
    auto mass_below = [&](double cut) {
        double s = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            const double lo = g.x(i) - 0.5 * g.dx();
            const double hi = lo + g.dx();
            if (hi <= cut)
                s += std::norm(psi.amp[i]);
            else if (lo < cut)
                s += std::norm(psi.amp[i]) * (cut - lo) / g.dx();
        }
        return s * g.dx();
    };
    const double total = norm(psi);
    const double m1 = mass_below(p.cut_lm);
    const double m2 = mass_below(p.cut_mr);
    const double m3 = mass_below(p.cut_rr);
    return {m1, m2 - m1, m3 - m2, total - m3};
}

SymmetryResult symmetry_functions(const Wavefunction& psi, double window_min) {
    const SpatialGrid& g = psi.grid;
    double sum_re = 0.0, sum_im = 0.0, abs_re = 0.0, abs_im = 0.0, mass = 0.0;
    long count = 0;
    for (int i = 0; i < g.n(); ++i) {
        if (g.x(i) <= window_min) continue;
        const cplx a = psi.amp[i];
        sum_re += a.real();
        sum_im += a.imag();
        abs_re += std::abs(a.real());
        abs_im += std::abs(a.imag());
        mass += std::norm(a);
        ++count;
    }
    if (count == 0) throw ConfigError("symmetry window is empty");
    if (mass * g.dx() < 1e-6)
        throw NumericalDomainError("symmetry window holds negligible probability");
    const double floor = 1e-12 * static_cast<double>(count);
    SymmetryResult r;
    r.re_weight = abs_re;
    r.im_weight = abs_im;
    r.re_degenerate = abs_re < floor;
    r.im_degenerate = abs_im < floor;
    r.s_r = r.re_degenerate ? 0.0 : sum_re / abs_re;
    r.s_i = r.im_degenerate ? 0.0 : sum_im / abs_im;
    return r;
}

std::array<double, 2> eigenstate_fidelities(const Wavefunction& psi,
                                            std::span<const double> potential,
                                            const RegionPartition& partition) {
    const SpatialGrid& g = psi.grid;
    int i_lo = 0;
    while (i_lo < g.n() && g.x(i_lo) <= partition.cut_mr) ++i_lo;
    EigenResult er = window_eigenpairs(g, potential, i_lo, g.n(), 2);
    const double f0 = std::norm(overlap(er.states[0], psi));
    const double f1 = std::norm(overlap(er.states[1], psi));
    return {f0, f1};
}

std::string diagnostics_csv_header() {
    return "t,rho_L,rho_M,rho_RL,rho_RR,S_R,S_I,fid_sym,fid_antisym,leak";
}

namespace {
std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
    std::ostringstream os;
    os << g17(r.t) << ',' << g17(r.rho_l) << ',' << g17(r.rho_m) << ',' << g17(r.rho_rl) << ','
       << g17(r.rho_rr) << ',' << g17(r.s_r) << ',' << g17(r.s_i) << ',' << g17(r.fid_sym) << ','
       << g17(r.fid_antisym) << ',' << g17(r.boundary_leak);
    return os.str();
}

double imbalance_amplitude(const std::vector<DiagnosticsRecord>& records, double hold_start,
                           double omega_r) {
    const double period = 2.0 * std::numbers::pi / omega_r;
    double t_max = hold_start;
    for (const auto& r : records) t_max = std::max(t_max, r.t);
    if (t_max - hold_start < 3.0 * period) {
        std::ostringstream os;
        os << "hold phase too short for the imbalance amplitude: have " << t_max - hold_start
           << ", need >= " << 3.0 * period << " (3 tunneling periods)";
        throw ConfigError(os.str());
    }
    double amp = -1.0;
    bool any = false;
    for (const auto& r : records) {
        if (r.t <= hold_start) continue;
        amp = std::max(amp, r.rho_rl - r.rho_rr);
        any = true;
    }
    if (!any) throw ConfigError("no hold-phase records");
    return amp;
}

}  // namespace sapsim
