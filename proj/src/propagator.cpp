#include "sapsim/propagator.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

#include "sapsim/errors.hpp"

namespace sapsim {

namespace {
// FFTW plan creation is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void PropagationSettings::validate(double max_frequency) const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (dt * max_frequency > 0.05 + 1e-12) {
        std::ostringstream os;
        os << "dt too large for accuracy: dt*max(omega) = " << dt * max_frequency << " > 0.05";
        throw ConfigError(os.str());
    }
    if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
}

SplitOperator::SplitOperator(const SpatialGrid& grid)
    : grid_(grid),
      fft_buf_(grid.n()),
      kin_phase_(grid.n()),
      half_phase_(grid.n()),
      v_buf_(grid.n()) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto* buf = reinterpret_cast<fftw_complex*>(fft_buf_.data());
    plan_fwd_ = fftw_plan_dft_1d(grid.n(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(grid.n(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SplitOperator::~SplitOperator() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SplitOperator::apply_phase(Wavefunction& psi, std::span<const cplx> phase) const {
    for (int i = 0; i < grid_.n(); ++i) psi.amp[i] *= phase[i];
}

void SplitOperator::build_half_phase(std::span<const double> potential, double dt,
                                     std::span<cplx> out) const {
    for (int i = 0; i < grid_.n(); ++i) {
        const double v = potential[i];
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite potential value at x = " << grid_.x(i);
            throw NumericalDomainError(os.str());
        }
        out[i] = std::polar(1.0, -0.5 * dt * v);
    }
}

void SplitOperator::kinetic_full_step(Wavefunction& psi, double dt) {
    if (kin_dt_ != dt) {
        for (int i = 0; i < grid_.n(); ++i) {
            const double k = grid_.k(i);
            kin_phase_[i] = std::polar(1.0, -0.5 * dt * k * k);
        }
        kin_dt_ = dt;
    }
    std::copy(psi.amp.begin(), psi.amp.end(), fft_buf_.begin());
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double inv_n = 1.0 / grid_.n();
    for (int i = 0; i < grid_.n(); ++i) fft_buf_[i] *= kin_phase_[i] * inv_n;
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::copy(fft_buf_.begin(), fft_buf_.end(), psi.amp.begin());
}

void SplitOperator::step(Wavefunction& psi, std::span<const double> potential, double dt) {
    if (!(psi.grid == grid_)) throw ConfigError("wavefunction grid does not match propagator");
    build_half_phase(potential, dt, half_phase_);
    apply_phase(psi, half_phase_);
    kinetic_full_step(psi, dt);
    apply_phase(psi, half_phase_);
}

double SplitOperator::evolve(Wavefunction& psi, const PotentialOfTime& potential, double t0,
                             double t_final, const PropagationSettings& s,
                             const std::vector<Observer>& observers) {
    if (t_final < t0) throw ConfigError("evolve requires t_final >= t0");
    const long n_steps = std::lround((t_final - t0) / s.dt);
    double t = t0;
    for (long step = 0; step < n_steps; ++step) {
        potential(t + 0.5 * s.dt, v_buf_);
        this->step(psi, v_buf_, s.dt);
        t = t0 + (step + 1) * s.dt;
        if (step % s.record_stride == 0 || step == n_steps - 1) {
            for (const Observer& ob : observers) {
                try {
                    ob(step, t, psi);
                } catch (const BoundaryContaminationError&) {
                    throw;
                } catch (const std::exception& e) {
                    std::ostringstream os;
                    os << "observer failed at step " << step << ", t = " << t << ": " << e.what();
                    throw NumericalDomainError(os.str());
                }
            }
        }
    }
    return t;
}

double SplitOperator::evolve_static(Wavefunction& psi, std::span<const double> potential,
                                    double t0, double t_final, const PropagationSettings& s,
                                    const std::vector<Observer>& observers) {
    if (t_final < t0) throw ConfigError("evolve requires t_final >= t0");
    const long n_steps = std::lround((t_final - t0) / s.dt);
    if (n_steps == 0) return t0;
    build_half_phase(potential, s.dt, half_phase_);
    double t = t0;
    for (long step = 0; step < n_steps; ++step) {
        apply_phase(psi, half_phase_);
        kinetic_full_step(psi, s.dt);
        apply_phase(psi, half_phase_);
        t = t0 + (step + 1) * s.dt;
        if (step % s.record_stride == 0 || step == n_steps - 1) {
            for (const Observer& ob : observers) {
                try {
                    ob(step, t, psi);
                } catch (const BoundaryContaminationError&) {
                    throw;
                } catch (const std::exception& e) {
                    std::ostringstream os;
                    os << "observer failed at step " << step << ", t = " << t << ": " << e.what();
                    throw NumericalDomainError(os.str());
                }
            }
        }
    }
    return t;
}

double energy_expectation(const Wavefunction& psi, std::span<const double> potential) {
    const SpatialGrid& g = psi.grid;
    double ev = 0.0;
    for (int i = 0; i < g.n(); ++i) ev += std::norm(psi.amp[i]) * potential[i];
    ev *= g.dx();

    // spectral kinetic energy via a one-off transform
    std::vector<cplx> buf(psi.amp);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        auto* b = reinterpret_cast<fftw_complex*>(buf.data());
        plan = fftw_plan_dft_1d(g.n(), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    // FFTW_MEASURE would scribble on the buffer; refill to stay safe either way
    std::copy(psi.amp.begin(), psi.amp.end(), buf.begin());
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    double et = 0.0, total = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const double k = g.k(i);
        const double w = std::norm(buf[i]);
        et += 0.5 * k * k * w;
        total += w;
    }
    if (total > 0.0) et *= norm(psi) / total;
    return ev + et;
}

double packet_center(const Wavefunction& psi) {
    const SpatialGrid& g = psi.grid;
    double s = 0.0;
    for (int i = 0; i < g.n(); ++i) s += g.x(i) * std::norm(psi.amp[i]);
    return s * g.dx() / norm(psi);
}

double packet_width(const Wavefunction& psi) {
    const SpatialGrid& g = psi.grid;
    const double c = packet_center(psi);
    double s = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const double d = g.x(i) - c;
        s += d * d * std::norm(psi.amp[i]);
    }
    const double var = s * g.dx() / norm(psi);
    return std::sqrt(2.0 * var);
}

}  // namespace sapsim
