#pragma once

#include <span>

#include "sapsim/grid.hpp"

namespace sapsim {

/// Trap frequencies and the fixed double-well geometry.
///
/// Distance convention used throughout: schedule distances (d_LM, d_MR,
/// d_min, initial separations) and d_R are measured from a well center to
/// the midpoint between the paired wells, in the closed-form tunneling
/// rate's units. Center-to-center separations are twice these values.
struct TrapLayout {
    double omega = 1.0;    // left and middle trap frequency
    double omega_R = 1.0;  // frequency of the two right-hand wells
    double d_R = 1.5;      // half-separation of the double well, units alpha_R

    double alpha() const;    // 1/sqrt(omega)
    double alpha_R() const;  // 1/sqrt(omega_R)

    void validate() const;
};

enum class PulseOrder {
    counter_intuitive,  // double well approaches the middle trap first
    intuitive,          // left trap approaches first (control case)
};

/// Cosine approach/reproach schedules for the two moving traps.
struct MotionSchedule {
    double T = 0.0;         // duration of one approach+reproach sequence
    double delta_t = 0.0;   // delay between the two sequences
    double d_min = 0.0;     // closest half-separation
    double d_lm0 = 0.0;     // rest half-separation, left <-> middle
    double d_mr0 = 0.0;     // rest half-separation, middle <-> near right well
    PulseOrder order = PulseOrder::counter_intuitive;

    double protocol_end() const { return T + delta_t; }

    void validate(const TrapLayout& layout) const;
};

/// Half-separation between the left and middle traps at time t.
double distance_lm(double t, const MotionSchedule& s);

/// Half-separation between the middle trap and the near right-hand well.
double distance_mr(double t, const MotionSchedule& s);

struct TrapCenters {
    double x_l, x_m, x_rl, x_rr;
};

/// Instantaneous trap positions; middle trap fixed at the origin.
TrapCenters centers_at(double t, const TrapLayout& layout, const MotionSchedule& s);

/// min over the four parabolas; >= 0, zero only at trap centers.
double potential_at(double x, double t, const TrapLayout& layout, const MotionSchedule& s);

void potential_on_grid(const SpatialGrid& grid, double t, const TrapLayout& layout,
                       const MotionSchedule& s, std::span<double> v_out);

}  // namespace sapsim
