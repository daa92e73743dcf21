#include "sapsim/four_level.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sapsim/eigensolver.hpp"
#include "sapsim/errors.hpp"

namespace sapsim {

double tunneling_rate(double d) {
    if (!(d > 1.0)) {
        std::ostringstream os;
        os << "tunneling rate undefined for d = " << d << " (requires d > 1)";
        throw NumericalDomainError(os.str());
    }
    // overflow-safe rearrangement of
    //   (-1 + e^{d^2} (1 + d (1 - erf d))) / (sqrt(pi) (e^{2 d^2} - 1) / (2 d))
    const double e = std::exp(-d * d);
    const double a = 1.0 + d * std::erfc(d) - e;
    return 2.0 * d * a * e / (std::sqrt(std::numbers::pi) * (1.0 - std::exp(-2.0 * d * d)));
}

double resonant_omega_R(double omega, double d_R, Branch branch) {
    const double f = tunneling_rate(d_R);
    if (branch == Branch::antisymmetric) return omega / (1.0 + f);
    if (f >= 1.0) throw NumericalDomainError("symmetric branch requires tunneling ratio < 1");
    return omega / (1.0 - f);
}

double calibrated_omega_R(double omega, double d_R, Branch branch) {
    // level of the isolated double well that must sit at omega/2
    auto level = [&](double omega_R) {
        const double a_r = 1.0 / std::sqrt(omega_R);
        const double hw = d_R * a_r;
        const int n = 1600;
        const double span = hw + 9.0 * a_r;
        std::vector<double> x(n), v(n);
        const double dx = 2.0 * span / n;
        for (int i = 0; i < n; ++i) {
            x[i] = -span + i * dx;
            const double dl = x[i] + hw, dr = x[i] - hw;
            v[i] = 0.5 * omega_R * omega_R * std::min(dl * dl, dr * dr);
        }
        auto e = lowest_eigenvalues(x, v, 2);
        return (branch == Branch::antisymmetric ? e[1] : e[0]) - 0.5 * omega;
    };
    double lo = 0.80 * resonant_omega_R(omega, d_R, branch);
    double hi = 1.30 * resonant_omega_R(omega, d_R, branch);
    double flo = level(lo), fhi = level(hi);
    if (flo * fhi > 0.0) throw NumericalDomainError("resonance calibration failed to bracket");
    for (int it = 0; it < 80 && hi - lo > 1e-11; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = level(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

Matrix4c hamiltonian(const CouplingSet& c) {
    Matrix4c h{};
    const double delta = -0.5 * c.detuning;  // right-pair offset relative to L/M levels
    h[0][1] = h[1][0] = -0.5 * c.omega_lm;
    h[1][2] = h[2][1] = -0.5 * c.omega_mr;
    h[2][3] = h[3][2] = -0.5 * c.omega_r;
    h[2][2] = h[3][3] = delta;
    return h;
}

DarkState dark_state(double omega_lm, double omega_mr, Branch branch) {
    if (omega_lm == 0.0 && omega_mr == 0.0)
        throw NumericalDomainError("dark-state mixing angle undefined: both rates zero");
    if (omega_lm < 0.0 || omega_mr < 0.0)
        throw NumericalDomainError("tunneling rates must be non-negative");
    DarkState ds;
    ds.branch = branch;
    ds.theta = std::atan2(std::numbers::sqrt2 * omega_lm, omega_mr);
    const double ct = std::cos(ds.theta);
    const double st = std::sin(ds.theta);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    // the right-pair combination carries the target parity
    const double sign_rr = (branch == Branch::symmetric) ? -1.0 : +1.0;
    ds.amplitudes = {cplx{ct, 0.0}, cplx{0.0, 0.0}, cplx{-st * inv_sqrt2, 0.0},
                     cplx{sign_rr * st * inv_sqrt2, 0.0}};
    return ds;
}

double dark_state_nullity(const CouplingSet& c, Branch branch) {
    const Matrix4c h = hamiltonian(c);
    const DarkState ds = dark_state(c.omega_lm, c.omega_mr, branch);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx r{0.0, 0.0};
        for (int j = 0; j < 4; ++j) r += h[i][j] * ds.amplitudes[j];
        s += std::norm(r);
    }
    return std::sqrt(s);
}

CouplingSet couplings_from_geometry(const TrapLayout& layout, const MotionSchedule& s, double t) {
    CouplingSet c;
    const double alpha = layout.alpha();
    const double alpha_r = layout.alpha_R();
    const double abar = std::sqrt(alpha * alpha_r);  // effective width of the mixed pair
    c.omega_lm = layout.omega * tunneling_rate(distance_lm(t, s) / alpha);
    c.omega_mr = std::sqrt(layout.omega * layout.omega_R) * tunneling_rate(distance_mr(t, s) / abar);
    c.omega_r = layout.omega_R * tunneling_rate(layout.d_R);
    c.detuning = layout.omega - layout.omega_R;
    return c;
}

double FourLevelState::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : c) s += std::norm(a);
    return s;
}

namespace {
std::array<cplx, 4> rhs(const Matrix4c& h, const std::array<cplx, 4>& c) {
    std::array<cplx, 4> out{};
    const cplx mi{0.0, -1.0};
    for (int i = 0; i < 4; ++i) {
        cplx s{0.0, 0.0};
        for (int j = 0; j < 4; ++j) s += h[i][j] * c[j];
        out[i] = mi * s;
    }
    return out;
}
}  // namespace

std::vector<FourLevelState> integrate_four_level(const FourLevelState& initial,
                                                 const TrapLayout& layout,
                                                 const MotionSchedule& s, double dt,
                                                 double t_final, int record_stride) {
    if (!(dt > 0.0) || !(t_final > 0.0)) throw ConfigError("integration needs dt, t_final > 0");
    if (std::abs(initial.norm_sq() - 1.0) > 1e-8)
        throw ConfigError("initial four-level state must be normalized");

    const long n_steps = std::lround(t_final / dt);
    std::vector<FourLevelState> traj;
    traj.reserve(static_cast<size_t>(n_steps / std::max(record_stride, 1)) + 2);
    traj.push_back(initial);

    std::array<cplx, 4> c = initial.c;
    double t = initial.time;
    for (long step = 0; step < n_steps; ++step) {
        const Matrix4c h0 = hamiltonian(couplings_from_geometry(layout, s, t));
        const Matrix4c hm = hamiltonian(couplings_from_geometry(layout, s, t + 0.5 * dt));
        const Matrix4c h1 = hamiltonian(couplings_from_geometry(layout, s, t + dt));

        const auto k1 = rhs(h0, c);
        std::array<cplx, 4> tmp;
        for (int i = 0; i < 4; ++i) tmp[i] = c[i] + 0.5 * dt * k1[i];
        const auto k2 = rhs(hm, tmp);
        for (int i = 0; i < 4; ++i) tmp[i] = c[i] + 0.5 * dt * k2[i];
        const auto k3 = rhs(hm, tmp);
        for (int i = 0; i < 4; ++i) tmp[i] = c[i] + dt * k3[i];
        const auto k4 = rhs(h1, tmp);
        for (int i = 0; i < 4; ++i)
            c[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = initial.time + (step + 1) * dt;

        if (step % record_stride == 0 || step == n_steps - 1) {
            FourLevelState st;
            st.c = c;
            st.time = t;
            if (std::abs(st.norm_sq() - 1.0) > 1e-6) {
                std::ostringstream os;
                os << "four-level norm drift " << st.norm_sq() - 1.0 << " at t = " << t
                   << "; reduce dt";
                throw NumericalDomainError(os.str());
            }
            traj.push_back(st);
        }
    }
    return traj;
}

}  // namespace sapsim
