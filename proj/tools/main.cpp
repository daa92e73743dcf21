#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sapsim/errors.hpp"
#include "sapsim/experiment.hpp"

namespace {

struct CliOptions {
    std::string branch;
    double omega = 0.0;
    double d_R = 0.0;
    double detuning = 0.0;
    double t0_scale = 0.0;
    double delta_t_fraction = 0.0;
    double d0_factor = 0.0;
    double protocol_periods = 0.0;
    double hold_periods = -1.0;
    std::string order;
    bool closed_form = false;
    int grid_n = 0;
    double grid_half_width = 0.0;
    double dt_factor = 0.0;
    int record_stride = 0;
    int workers = -1;
    std::string out;
    std::string label;
    std::string config_path;

    std::string axis;
    std::vector<double> values;
    double from = 0.0, to = 0.0;
    int points = 0;
};

void add_common(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--config", o.config_path, "configuration file (INI, key = value)");
    cmd->add_option("--branch", o.branch, "target symmetry: sym|antisym (aliases -|+)");
    cmd->add_option("--omega", o.omega, "left/middle trap frequency");
    cmd->add_option("--d-R", o.d_R, "double-well half-separation in alpha_R units");
    cmd->add_option("--detuning", o.detuning, "relative omega_R offset from resonance");
    cmd->add_option("--t0-scale", o.t0_scale, "multiplier on the default approach time T");
    cmd->add_option("--delta-t-fraction", o.delta_t_fraction, "delay as a fraction of T");
    cmd->add_option("--d0-factor", o.d0_factor, "rest half-separation / max(alpha, alpha_R)");
    cmd->add_option("--protocol-periods", o.protocol_periods,
                    "default T0 in tunneling periods (0 = per-branch default)");
    cmd->add_option("--hold-periods", o.hold_periods, "post-protocol hold in tunneling periods");
    cmd->add_option("--order", o.order, "pulse order: counter|intuitive");
    cmd->add_flag("--closed-form-resonance", o.closed_form,
                  "use the asymptotic closed-form resonance instead of level matching");
    cmd->add_option("--grid-n", o.grid_n, "number of grid points");
    cmd->add_option("--grid-half-width", o.grid_half_width, "half box size in alpha units");
    cmd->add_option("--dt-factor", o.dt_factor, "dt = dt_factor / max(omega, omega_R)");
    cmd->add_option("--record-stride", o.record_stride, "steps between diagnostics records");
    cmd->add_option("--workers", o.workers, "sweep worker threads (0 = hardware)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--label", o.label, "run label used in output file names");
}

sapsim::ExperimentConfig merge(const CLI::App* cmd, const CliOptions& o) {
    sapsim::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = sapsim::config_from_ini_file(o.config_path);

    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--branch")) cfg.branch = sapsim::branch_from_name(o.branch);
    if (passed("--omega")) cfg.omega = o.omega;
    if (passed("--d-R")) cfg.d_R = o.d_R;
    if (passed("--detuning")) cfg.detuning_fraction = o.detuning;
    if (passed("--t0-scale")) cfg.t0_scale = o.t0_scale;
    if (passed("--delta-t-fraction")) cfg.delta_t_fraction = o.delta_t_fraction;
    if (passed("--d0-factor")) cfg.d0_factor = o.d0_factor;
    if (passed("--protocol-periods")) cfg.protocol_periods = o.protocol_periods;
    if (passed("--hold-periods")) cfg.hold_periods = o.hold_periods;
    if (passed("--order"))
        cfg.order = (o.order == "intuitive") ? sapsim::PulseOrder::intuitive
                                             : sapsim::PulseOrder::counter_intuitive;
    if (passed("--closed-form-resonance")) cfg.closed_form_resonance = o.closed_form;
    if (passed("--grid-n")) cfg.grid_n = o.grid_n;
    if (passed("--grid-half-width")) cfg.grid_half_width = o.grid_half_width;
    if (passed("--dt-factor")) cfg.dt_factor = o.dt_factor;
    if (passed("--record-stride")) cfg.record_stride = o.record_stride;
    if (passed("--workers")) cfg.workers = o.workers;
    if (passed("--out")) cfg.output_dir = o.out;
    if (passed("--label")) cfg.label = o.label;
    return cfg;
}

void print_summary(const sapsim::RunResult& r) {
    const auto& s = r.summary;
    std::printf("run %-18s branch=%s omega_R=%.6f T=%.2f delta_t=%.2f\n",
                r.config.label.c_str(), sapsim::branch_name(r.config.branch).c_str(),
                r.protocol.layout.omega_R, r.protocol.schedule.T, r.protocol.schedule.delta_t);
    std::printf("  transfer=%.5f  rho=(%.5f, %.5f, %.5f, %.5f)  max_rho_M=%.5f\n", s.transfer,
                s.rho_l, s.rho_m, s.rho_rl, s.rho_rr, s.max_rho_m);
    std::printf("  S=(%+.4f, %+.4f)  fid_sym=%.5f  fid_antisym=%.5f", s.s_r, s.s_i, s.fid_sym,
                s.fid_antisym);
    if (s.imbalance_amplitude) std::printf("  imbalance=%.5f", *s.imbalance_amplitude);
    std::printf("\n  adiabaticity: trap %.3f (%s)  tunneling %.3f (%s)  wall=%.1fs\n",
                r.adiabaticity.trap_ratio, r.adiabaticity.trap_ok ? "ok" : "violated",
                r.adiabaticity.tunneling_ratio, r.adiabaticity.tunneling_ok ? "ok" : "violated",
                r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sapsim: spatial adiabatic passage of a single atom into a double-well "
                 "superposition state"};
    app.require_subcommand(1);

    CliOptions run_o, sweep_o, check_o;
    CLI::App* cmd_run = app.add_subcommand("run", "single protocol run");
    add_common(cmd_run, run_o);
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweep");
    add_common(cmd_sweep, sweep_o);
    cmd_sweep->add_option("--axis", sweep_o.axis,
                          "detuning_fraction|T0_scale|d_R|delta_t_fraction");
    cmd_sweep->add_option("--values", sweep_o.values, "explicit sweep values")->delimiter(',');
    cmd_sweep->add_option("--from", sweep_o.from, "sweep range start");
    cmd_sweep->add_option("--to", sweep_o.to, "sweep range end");
    cmd_sweep->add_option("--points", sweep_o.points, "uniform point count for --from/--to");
    CLI::App* cmd_check = app.add_subcommand("check", "adiabaticity conditions only");
    add_common(cmd_check, check_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : sapsim::exit_config;
    }

    try {
        if (cmd_run->parsed()) {
            sapsim::ExperimentConfig cfg = merge(cmd_run, run_o);
            sapsim::RunResult res = sapsim::run_protocol(cfg);
            print_summary(res);
            if (!cfg.output_dir.empty()) sapsim::emit_report({std::move(res)}, cfg.output_dir);
        } else if (cmd_sweep->parsed()) {
            sapsim::ExperimentConfig cfg = merge(cmd_sweep, sweep_o);
            if (cmd_sweep->count("--axis")) cfg.sweep_axis = sweep_o.axis;
            if (cmd_sweep->count("--values")) cfg.sweep_values = sweep_o.values;
            if (cmd_sweep->count("--points")) {
                if (sweep_o.points < 1) throw sapsim::ConfigError("--points must be >= 1");
                cfg.sweep_values.clear();
                for (int i = 0; i < sweep_o.points; ++i) {
                    const double u =
                        sweep_o.points == 1 ? 0.0
                                            : static_cast<double>(i) / (sweep_o.points - 1);
                    cfg.sweep_values.push_back(sweep_o.from + u * (sweep_o.to - sweep_o.from));
                }
            }
            auto results = sapsim::run_sweep(cfg);
            int failed = 0;
            for (const auto& r : results) {
                if (r.ok()) {
                    print_summary(r);
                } else {
                    ++failed;
                    std::printf("run %-18s FAILED: %s\n", r.config.label.c_str(),
                                r.error.c_str());
                }
            }
            if (!cfg.output_dir.empty()) sapsim::emit_report(results, cfg.output_dir);
            std::printf("sweep: %zu points, %d failed\n", results.size(), failed);
        } else if (cmd_check->parsed()) {
            sapsim::ExperimentConfig cfg = merge(cmd_check, check_o);
            const auto a = sapsim::check_adiabaticity(cfg);
            std::printf("trap condition      (T+dt)*min(omega,omega_R)/2pi = %.4f : %s\n",
                        a.trap_ratio, a.trap_ok ? "satisfied" : "violated");
            std::printf("tunneling condition (T+dt)*nu_R                  = %.4f : %s\n",
                        a.tunneling_ratio, a.tunneling_ok ? "satisfied" : "violated");
        }
    } catch (const sapsim::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return sapsim::exit_config;
    } catch (const sapsim::BoundaryContaminationError& e) {
        std::fprintf(stderr, "boundary contamination: %s\n", e.what());
        return sapsim::exit_boundary;
    } catch (const sapsim::NumericalDomainError& e) {
        std::fprintf(stderr, "numerical domain error: %s\n", e.what());
        return sapsim::exit_numeric;
    } catch (const sapsim::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return sapsim::exit_io;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return sapsim::exit_numeric;
    }
    return sapsim::exit_ok;
}
