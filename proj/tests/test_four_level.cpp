#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sapsim/errors.hpp"
#include "sapsim/four_level.hpp"

using namespace sapsim;

namespace {

// independent erf for the closed-form oracle: truncated Taylor series about 0,
// accurate to ~1e-12 for |x| <= 3.5 with 40 terms
double erf_oracle(double x) {
    const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
    double term = x, sum = x;
    for (int n = 1; n < 60; ++n) {
        term *= -x * x / n;
        sum += term / (2 * n + 1);
    }
    return two_over_sqrt_pi * sum;
}

// tunneling rate evaluated in the literal printed arrangement (valid for
// moderate d where e^{d^2} does not overflow), with the independent erf
double rate_oracle(double d) {
    const double num = -1.0 + std::exp(d * d) * (1.0 + d * (1.0 - erf_oracle(d)));
    const double den = std::sqrt(std::numbers::pi) * (std::exp(2.0 * d * d) - 1.0) / (2.0 * d);
    return num / den;
}

CouplingSet resonant_couplings(double olm, double omr, double d_R, Branch branch) {
    CouplingSet c;
    c.omega_lm = olm;
    c.omega_mr = omr;
    const double omega_R = resonant_omega_R(1.0, d_R, branch);
    c.omega_r = omega_R * tunneling_rate(d_R);
    // impose the resonance identity exactly
    c.detuning = (branch == Branch::antisymmetric) ? c.omega_r : -c.omega_r;
    return c;
}

}  // namespace

TEST_CASE("closed-form rate: values, decoupled limit, monotonicity") {
    CHECK(tunneling_rate(1.5) == doctest::Approx(0.170557).epsilon(2e-5));
    CHECK(tunneling_rate(6.0) < 1e-14);
    CHECK(tunneling_rate(1.2) > tunneling_rate(1.5));
    CHECK(tunneling_rate(1.5) > tunneling_rate(2.0));
    CHECK(tunneling_rate(7.0) < 1e-6);  // rest-separation decoupling
    CHECK_THROWS_AS(tunneling_rate(1.0), NumericalDomainError);
    CHECK_THROWS_AS(tunneling_rate(0.3), NumericalDomainError);
}

TEST_CASE("closed-form rate agrees with the independent-erf oracle") {
    for (double d : {1.2, 1.5, 2.0, 2.5, 3.0}) {
        CHECK(tunneling_rate(d) == doctest::Approx(rate_oracle(d)).epsilon(2e-6));
    }
}

TEST_CASE("resonant frequencies match the derived values") {
    CHECK(std::abs(resonant_omega_R(1.0, 1.5, Branch::antisymmetric) - 0.8543) < 1e-3);
    CHECK(std::abs(resonant_omega_R(1.0, 1.5, Branch::symmetric) - 1.2057) < 1e-3);
    // vanishing-splitting limit recovers equal trap frequencies
    CHECK(resonant_omega_R(1.0, 8.0, Branch::antisymmetric) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(resonant_omega_R(1.0, 8.0, Branch::symmetric) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("calibrated resonance sits near the closed form") {
    const double cf = resonant_omega_R(1.0, 1.5, Branch::antisymmetric);
    const double cal = calibrated_omega_R(1.0, 1.5, Branch::antisymmetric);
    CHECK(std::abs(cal / cf - 1.0) < 0.05);
    const double cf2 = resonant_omega_R(1.0, 1.5, Branch::symmetric);
    const double cal2 = calibrated_omega_R(1.0, 1.5, Branch::symmetric);
    CHECK(std::abs(cal2 / cf2 - 1.0) < 0.06);
    CHECK(cal < 1.0);
    CHECK(cal2 > 1.0);
}

TEST_CASE("hamiltonian structure") {
    CouplingSet c;
    c.omega_lm = 0.2;
    c.omega_mr = 0.3;
    c.omega_r = 0.1;
    c.detuning = 0.05;
    const Matrix4c h = hamiltonian(c);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(h[i][j] == std::conj(h[j][i]));
    CHECK(h[0][0] == cplx{0.0, 0.0});
    CHECK(h[1][1] == cplx{0.0, 0.0});
    CHECK(h[2][2].real() == doctest::Approx(-0.025));
    CHECK(h[0][1].real() == doctest::Approx(-0.1));
    CHECK(h[1][2].real() == doctest::Approx(-0.15));
    CHECK(h[2][3].real() == doctest::Approx(-0.05));
    CHECK(h[0][2] == cplx{0.0, 0.0});
    CHECK(h[0][3] == cplx{0.0, 0.0});
    CHECK(h[1][3] == cplx{0.0, 0.0});
}

TEST_CASE("dark state endpoints and mixing angle") {
    const DarkState start = dark_state(0.0, 1.0, Branch::antisymmetric);
    CHECK(start.theta == doctest::Approx(0.0));
    CHECK(std::abs(start.amplitudes[0]) == doctest::Approx(1.0));

    const DarkState end = dark_state(1.0, 0.0, Branch::antisymmetric);
    CHECK(end.theta == doctest::Approx(std::numbers::pi / 2));
    CHECK(std::abs(end.amplitudes[2]) == doctest::Approx(1.0 / std::numbers::sqrt2));
    CHECK(std::abs(end.amplitudes[3]) == doctest::Approx(1.0 / std::numbers::sqrt2));

    const DarkState mid = dark_state(0.7, 0.7, Branch::symmetric);
    CHECK(mid.theta == doctest::Approx(std::atan(std::numbers::sqrt2)).epsilon(1e-12));
    CHECK(mid.theta == doctest::Approx(0.955317).epsilon(1e-5));

    CHECK_THROWS_AS(dark_state(0.0, 0.0, Branch::symmetric), NumericalDomainError);
}

TEST_CASE("dark state parity: symmetric branch equal signs, antisymmetric opposite") {
    const DarkState sym = dark_state(1.0, 1.0, Branch::symmetric);
    CHECK(sym.amplitudes[2].real() * sym.amplitudes[3].real() > 0.0);
    const DarkState anti = dark_state(1.0, 1.0, Branch::antisymmetric);
    CHECK(anti.amplitudes[2].real() * anti.amplitudes[3].real() < 0.0);
}

TEST_CASE("nullity below 1e-12 for 50 random angles, both branches") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> angle(0.01, std::numbers::pi / 2 - 0.01);
    std::uniform_real_distribution<double> scale(0.05, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const double th = angle(rng);
        const double r = scale(rng);
        const double omr = r * std::cos(th);
        const double olm = r * std::sin(th) / std::numbers::sqrt2;
        for (Branch b : {Branch::symmetric, Branch::antisymmetric}) {
            const CouplingSet c = resonant_couplings(olm, omr, 1.5, b);
            CHECK(dark_state_nullity(c, b) < 1e-12);
        }
    }
}

TEST_CASE("detuned couplings leave a residual that grows with detuning") {
    CouplingSet c = resonant_couplings(0.1, 0.2, 1.5, Branch::antisymmetric);
    CHECK(dark_state_nullity(c, Branch::antisymmetric) < 1e-12);
    CouplingSet d1 = c, d2 = c;
    d1.detuning *= 1.10;
    d2.detuning *= 1.20;
    const double r1 = dark_state_nullity(d1, Branch::antisymmetric);
    const double r2 = dark_state_nullity(d2, Branch::antisymmetric);
    CHECK(r1 > 0.0);
    CHECK(r2 > r1);
}

TEST_CASE("single-well limit reduces to the three-level dark state") {
    // omega_R = omega and no intra-well coupling: the chain dark state with
    // c_RR decoupled is null for any mixing angle
    CouplingSet c;
    c.omega_lm = 0.12;
    c.omega_mr = 0.27;
    c.omega_r = 0.0;
    c.detuning = 0.0;
    const Matrix4c h = hamiltonian(c);
    // three-level mixing angle: tan(theta3) = Omega_LM / Omega_MR (no sqrt 2,
    // the target is a single well rather than a pair combination)
    const double theta3 = std::atan2(c.omega_lm, c.omega_mr);
    std::array<cplx, 4> phi = {std::cos(theta3), 0.0, -std::sin(theta3), 0.0};
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx r{0.0, 0.0};
        for (int j = 0; j < 4; ++j) r += h[i][j] * phi[j];
        s += std::norm(r);
    }
    CHECK(std::sqrt(s) < 1e-14);
}

TEST_CASE("geometry couplings: decoupled at rest, ordered at closest approach") {
    TrapLayout l;
    l.omega = 1.0;
    l.omega_R = resonant_omega_R(1.0, 1.5, Branch::antisymmetric);
    l.d_R = 1.5;
    MotionSchedule s;
    const double m = std::max(l.alpha(), l.alpha_R());
    s.T = 100.0;
    s.delta_t = 10.0;
    s.d_min = 1.2 * m;
    s.d_lm0 = 7.0 * m;
    s.d_mr0 = 7.0 * m;

    const CouplingSet c0 = couplings_from_geometry(l, s, 0.0);
    CHECK(c0.omega_lm < 1e-6);
    CHECK(c0.omega_mr < 1e-6);
    CHECK(c0.omega_r == doctest::Approx(l.omega_R * tunneling_rate(1.5)).epsilon(1e-12));
    CHECK(c0.omega_r == doctest::Approx(0.1457).epsilon(2e-3));
    CHECK(c0.detuning == doctest::Approx(1.0 - l.omega_R));

    // at the first leg's closest approach the MR coupling is at its peak and
    // still dominates the just-starting LM coupling
    const CouplingSet cm = couplings_from_geometry(l, s, 0.5 * s.T);
    CHECK(cm.omega_mr > 3.0 * cm.omega_lm);
    CHECK(cm.omega_mr > 0.1);
    // early in the MR leg the LM coupling is negligible outright
    const CouplingSet ce = couplings_from_geometry(l, s, 0.3 * s.T);
    CHECK(ce.omega_mr > 1e3 * ce.omega_lm);
}

TEST_CASE("integrator: stationary dark state stays put under frozen couplings") {
    // freeze the geometry mid-pulse by a schedule whose legs are both at rest
    TrapLayout l;
    l.omega = 1.0;
    l.omega_R = resonant_omega_R(1.0, 1.5, Branch::antisymmetric);
    l.d_R = 1.5;
    MotionSchedule s;
    const double m = std::max(l.alpha(), l.alpha_R());
    s.T = 50.0;
    s.delta_t = 5.0;
    s.d_lm0 = 2.2 * m;
    s.d_mr0 = 2.2 * m;
    s.d_min = s.d_lm0 * (1.0 - 1e-12);  // cosine amplitude ~ 0: geometry frozen

    const CouplingSet c0 = couplings_from_geometry(l, s, 0.0);
    FourLevelState init;
    const DarkState ds = dark_state(c0.omega_lm, c0.omega_mr, Branch::antisymmetric);
    init.c = ds.amplitudes;

    const auto traj = integrate_four_level(init, l, s, 0.01, 30.0, 100);
    const auto& fin = traj.back();
    double dev = 0.0;
    for (int i = 0; i < 4; ++i) dev += std::norm(std::abs(fin.c[i]) - std::abs(init.c[i]));
    CHECK(std::sqrt(dev) < 1e-6);
}

TEST_CASE("integrator: zero couplings only rotate diagonal phases") {
    TrapLayout l;
    l.omega = 1.0;
    l.omega_R = 0.9;
    l.d_R = 6.0;  // negligible omega_r
    MotionSchedule s;
    const double m = std::max(l.alpha(), l.alpha_R());
    s.T = 10.0;
    s.delta_t = 1.0;
    s.d_lm0 = 8.0 * m;
    s.d_mr0 = 8.0 * m;
    s.d_min = s.d_lm0 * (1.0 - 1e-12);  // frozen geometry
    FourLevelState init;
    init.c = {cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}, cplx{0.5, 0.0}};
    const auto traj = integrate_four_level(init, l, s, 0.01, 20.0, 50);
    const auto& fin = traj.back();
    for (int i = 0; i < 4; ++i) CHECK(std::abs(fin.c[i]) == doctest::Approx(0.5).epsilon(1e-7));
    // right-pair phases advance relative to L/M at the diagonal offset rate
    const double expected_arg = -0.5 * (l.omega_R - l.omega) * 20.0;
    const double got = std::arg(fin.c[2] / fin.c[0]);
    CHECK(std::cos(got - expected_arg) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("integrator norm conservation over a full protocol") {
    TrapLayout l;
    l.omega = 1.0;
    l.omega_R = calibrated_omega_R(1.0, 1.5, Branch::antisymmetric);
    l.d_R = 1.5;
    const double nu = l.omega_R * tunneling_rate(1.5) / (2.0 * std::numbers::pi);
    MotionSchedule s;
    const double m = std::max(l.alpha(), l.alpha_R());
    s.T = 32.0 / 1.1 / nu;
    s.delta_t = 0.1 * s.T;
    s.d_min = 1.2 * m;
    s.d_lm0 = 4.5 * m;
    s.d_mr0 = 4.5 * m;

    FourLevelState init;
    init.c = {cplx{1.0, 0.0}, {}, {}, {}};
    const auto traj = integrate_four_level(init, l, s, 0.01, s.protocol_end(), 200);
    CHECK(std::abs(traj.back().norm_sq() - 1.0) < 1e-8);

    // branch selection: the final right-pair phases differ by pi
    const auto& fin = traj.back();
    CHECK(std::norm(fin.c[2]) + std::norm(fin.c[3]) > 0.95);
    double d = std::arg(fin.c[2]) - std::arg(fin.c[3]);
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    CHECK(std::abs(std::abs(d) - std::numbers::pi) < 0.05);
}

TEST_CASE("integrator branch selection: symmetric branch ends in phase") {
    TrapLayout l;
    l.omega = 1.0;
    l.omega_R = calibrated_omega_R(1.0, 1.5, Branch::symmetric);
    l.d_R = 1.5;
    const double nu = l.omega_R * tunneling_rate(1.5) / (2.0 * std::numbers::pi);
    MotionSchedule s;
    const double m = std::max(l.alpha(), l.alpha_R());
    s.T = 48.0 / 1.1 / nu;
    s.delta_t = 0.1 * s.T;
    s.d_min = 1.2 * m;
    s.d_lm0 = 5.5 * m;
    s.d_mr0 = 5.5 * m;

    FourLevelState init;
    init.c = {cplx{1.0, 0.0}, {}, {}, {}};
    const auto traj = integrate_four_level(init, l, s, 0.008, s.protocol_end(), 200);
    const auto& fin = traj.back();
    CHECK(std::norm(fin.c[2]) + std::norm(fin.c[3]) > 0.95);
    double d = std::arg(fin.c[2]) - std::arg(fin.c[3]);
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    CHECK(std::abs(d) < 0.05);
}
