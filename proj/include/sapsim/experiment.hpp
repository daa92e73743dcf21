#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sapsim/diagnostics.hpp"
#include "sapsim/four_level.hpp"
#include "sapsim/propagator.hpp"
#include "sapsim/trap_geometry.hpp"

namespace sapsim {

/// Full run description. Every field has a CLI flag and a config-file key;
/// precedence is flags > file > defaults.
struct ExperimentConfig {
    Branch branch = Branch::antisymmetric;
    double omega = 1.0;
    double d_R = 1.5;
    double detuning_fraction = 0.0;  // relative offset applied to resonant omega_R
    double t0_scale = 1.0;           // multiplier on the default approach time T
    double delta_t_fraction = 0.1;   // delta_t = fraction * T
    double d0_factor = 0.0;          // rest half-separation / max(alpha, alpha_R); 0 = per-branch default
    double protocol_periods = 0.0;   // default T0 in tunneling periods; 0 = per-branch default
    double hold_periods = 5.0;       // post-protocol hold, tunneling periods
    PulseOrder order = PulseOrder::counter_intuitive;
    bool closed_form_resonance = false;  // skip the level-matching calibration

    int grid_n = 2048;
    double grid_half_width = 24.0;
    double dt_factor = 0.01;  // dt = dt_factor / max(omega, omega_R)
    int record_stride = 25;

    int workers = 0;  // sweep concurrency; 0 = hardware
    std::string output_dir;
    std::string label = "run";

    std::string sweep_axis;            // detuning_fraction | T0_scale | d_R | delta_t_fraction
    std::vector<double> sweep_values;

    void validate() const;
};

/// Config with omega_R and all schedule times resolved to numbers.
struct ResolvedProtocol {
    TrapLayout layout;
    MotionSchedule schedule;
    PropagationSettings settings;
    double omega_R_resonant = 0.0;  // before the detuning offset
    double nu_R = 0.0;              // tunneling frequency in cycles, Omega_R / 2 pi
    double hold_time = 0.0;
    double t_end = 0.0;  // protocol_end + hold_time
};

ResolvedProtocol resolve_protocol(const ExperimentConfig& cfg);

struct AdiabaticityReport {
    double trap_ratio = 0.0;       // (T + delta_t) * min(omega, omega_R) / (2 pi)
    double tunneling_ratio = 0.0;  // (T + delta_t) * nu_R
    bool trap_ok = false;
    bool tunneling_ok = false;
};

AdiabaticityReport check_adiabaticity(const ExperimentConfig& cfg);

struct FourLevelComparison {
    std::array<double, 4> final_populations{};
    double max_middle = 0.0;
    double phase_rl_minus_rr = 0.0;  // arg c_RL - arg c_RR at protocol end
};

struct RunSummary {
    double transfer = 0.0;  // rho_RL + rho_RR at protocol end
    double rho_l = 0.0, rho_m = 0.0, rho_rl = 0.0, rho_rr = 0.0;
    double max_rho_m = 0.0;  // over the whole run
    double s_r = 0.0, s_i = 0.0;
    bool s_r_degenerate = false, s_i_degenerate = false;
    double fid_sym = 0.0, fid_antisym = 0.0;
    std::optional<double> imbalance_amplitude;  // absent when the hold is too short
    double final_norm = 0.0;
    double max_boundary_leak = 0.0;
};

struct RunResult {
    ExperimentConfig config;
    ResolvedProtocol protocol;
    AdiabaticityReport adiabaticity;
    std::vector<DiagnosticsRecord> records;
    RunSummary summary;
    FourLevelComparison model;
    Wavefunction final_state;
    double wall_seconds = 0.0;
    std::string error;  // set instead of throwing inside sweeps

    bool ok() const { return error.empty(); }
};

RunResult run_protocol(const ExperimentConfig& cfg);

/// Independent runs along the sweep axis; per-point failures are recorded
/// and the sweep continues. Points execute on a small worker pool; results
/// are merged in axis order.
std::vector<RunResult> run_sweep(const ExperimentConfig& cfg);

/// Writes config echo (INI), time-series CSV, final-state snapshot CSV,
/// sweep summary CSV and a JSON manifest into cfg.output_dir.
void emit_report(const std::vector<RunResult>& results, const std::string& dir);

/// Serializes a config as a reloadable INI (the config echo format).
std::string config_to_ini(const ExperimentConfig& cfg);

/// Parses the INI format written by config_to_ini.
ExperimentConfig config_from_ini_file(const std::string& path);

std::string branch_name(Branch b);
Branch branch_from_name(const std::string& name);

}  // namespace sapsim
