#include "sapsim/trap_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sapsim/errors.hpp"

namespace sapsim {

double TrapLayout::alpha() const { return 1.0 / std::sqrt(omega); }
double TrapLayout::alpha_R() const { return 1.0 / std::sqrt(omega_R); }

void TrapLayout::validate() const {
    if (!(omega > 0.0)) throw ConfigError("omega must be positive");
    if (!(omega_R > 0.0)) throw ConfigError("omega_R must be positive");
    if (!(d_R > 1.0)) throw ConfigError("d_R must exceed 1 (tunneling-rate validity)");
}

void MotionSchedule::validate(const TrapLayout& layout) const {
    const double m = std::max(layout.alpha(), layout.alpha_R());
    if (!(d_min > m))
        throw ConfigError("d_min must exceed max(alpha, alpha_R)");
    if (!(d_lm0 > d_min) || !(d_mr0 > d_min))
        throw ConfigError("initial separations must exceed d_min");
    if (!(T > 0.0)) throw ConfigError("approach time T must be positive");
    if (delta_t < 0.0) throw ConfigError("delta_t must be non-negative");
}

namespace {
double cosine_leg(double t, double t_start, double T, double d0, double d_min) {
    if (t < t_start || t > t_start + T) return d0;
    const double phase = 2.0 * std::numbers::pi * (t - t_start) / T;
    return 0.5 * (std::cos(phase) + 1.0) * (d0 - d_min) + d_min;
}
}  // namespace

double distance_lm(double t, const MotionSchedule& s) {
    const double start = (s.order == PulseOrder::counter_intuitive) ? s.delta_t : 0.0;
    return cosine_leg(t, start, s.T, s.d_lm0, s.d_min);
}

double distance_mr(double t, const MotionSchedule& s) {
    const double start = (s.order == PulseOrder::counter_intuitive) ? 0.0 : s.delta_t;
    return cosine_leg(t, start, s.T, s.d_mr0, s.d_min);
}

TrapCenters centers_at(double t, const TrapLayout& layout, const MotionSchedule& s) {
    TrapCenters c;
    c.x_m = 0.0;
    c.x_l = -2.0 * distance_lm(t, s);
    c.x_rl = 2.0 * distance_mr(t, s);
    c.x_rr = c.x_rl + 2.0 * layout.d_R * layout.alpha_R();
    if (!(c.x_l < c.x_m && c.x_m < c.x_rl && c.x_rl < c.x_rr)) {
        std::ostringstream os;
        os << "trap ordering violated at t = " << t << ": x_l=" << c.x_l << " x_m=" << c.x_m
           << " x_rl=" << c.x_rl << " x_rr=" << c.x_rr;
        throw ConfigError(os.str());
    }
    return c;
}

double potential_at(double x, double t, const TrapLayout& layout, const MotionSchedule& s) {
    const TrapCenters c = centers_at(t, layout, s);
    const double w2 = layout.omega * layout.omega;
    const double wr2 = layout.omega_R * layout.omega_R;
    const double vl = 0.5 * w2 * (x - c.x_l) * (x - c.x_l);
    const double vm = 0.5 * w2 * (x - c.x_m) * (x - c.x_m);
    const double vrl = 0.5 * wr2 * (x - c.x_rl) * (x - c.x_rl);
    const double vrr = 0.5 * wr2 * (x - c.x_rr) * (x - c.x_rr);
    return std::min(std::min(vl, vm), std::min(vrl, vrr));
}

void potential_on_grid(const SpatialGrid& grid, double t, const TrapLayout& layout,
                       const MotionSchedule& s, std::span<double> v_out) {
    const TrapCenters c = centers_at(t, layout, s);
    const double w2 = layout.omega * layout.omega;
    const double wr2 = layout.omega_R * layout.omega_R;
    for (int i = 0; i < grid.n(); ++i) {
        const double x = grid.x(i);
        const double vl = 0.5 * w2 * (x - c.x_l) * (x - c.x_l);
        const double vm = 0.5 * w2 * (x - c.x_m) * (x - c.x_m);
        const double vrl = 0.5 * wr2 * (x - c.x_rl) * (x - c.x_rl);
        const double vrr = 0.5 * wr2 * (x - c.x_rr) * (x - c.x_rr);
        v_out[i] = std::min(std::min(vl, vm), std::min(vrl, vrr));
    }
}

}  // namespace sapsim
