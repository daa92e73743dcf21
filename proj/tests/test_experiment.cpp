#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sapsim/errors.hpp"
#include "sapsim/experiment.hpp"

using namespace sapsim;

namespace {
ExperimentConfig quick_config() {
    // short protocol for fast end-to-end checks; not a physics showcase
    ExperimentConfig cfg;
    cfg.branch = Branch::antisymmetric;
    cfg.protocol_periods = 3.0;
    cfg.hold_periods = 0.0;
    cfg.grid_n = 512;
    cfg.grid_half_width = 30.0;
    cfg.dt_factor = 0.02;
    cfg.record_stride = 100;
    return cfg;
}
}  // namespace

TEST_CASE("adiabaticity check reproduces the formula arithmetic") {
    // with T = (1.3 nu_R)^-1 and delta_t = 0.1 T the tunneling ratio is 1.1/1.3
    ExperimentConfig cfg;
    cfg.branch = Branch::antisymmetric;
    // protocol_periods sets T0 in tunneling periods; T = (1.3 nu_R)^-1 means
    // T0 = 1.1 T = 1.1/1.3 periods
    cfg.protocol_periods = 1.1 / 1.3;
    cfg.delta_t_fraction = 0.1;
    const AdiabaticityReport a = check_adiabaticity(cfg);
    CHECK(a.tunneling_ratio == doctest::Approx(1.1 / 1.3).epsilon(1e-12));
    CHECK(a.tunneling_ratio == doctest::Approx(0.846).epsilon(1e-3));
    CHECK_FALSE(a.tunneling_ok);
    CHECK(a.trap_ok);  // omega >> Omega_R at these parameters

    // long protocols pass both conditions
    ExperimentConfig cfg2 = cfg;
    cfg2.protocol_periods = 2.0;
    const AdiabaticityReport b = check_adiabaticity(cfg2);
    CHECK(b.tunneling_ok);
    CHECK(b.trap_ok);

    // vanishing protocol time fails both
    ExperimentConfig cfg3 = cfg;
    cfg3.protocol_periods = 0.001;
    const AdiabaticityReport c = check_adiabaticity(cfg3);
    CHECK_FALSE(c.tunneling_ok);
    CHECK_FALSE(c.trap_ok);
}

TEST_CASE("config validation rejects out-of-range fields") {
    ExperimentConfig cfg;
    cfg.detuning_fraction = 0.7;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ExperimentConfig{};
    cfg.sweep_axis = "bogus";
    cfg.sweep_values = {1.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ExperimentConfig{};
    cfg.sweep_axis = "d_R";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);  // empty values
    cfg = ExperimentConfig{};
    cfg.dt_factor = 0.2;
    CHECK_THROWS_AS(resolve_protocol(cfg), ConfigError);  // violates dt bound
}

TEST_CASE("runs are deterministic") {
    const ExperimentConfig cfg = quick_config();
    const RunResult a = run_protocol(cfg);
    const RunResult b = run_protocol(cfg);
    CHECK(a.summary.transfer == b.summary.transfer);
    CHECK(a.summary.s_r == b.summary.s_r);
    CHECK(a.summary.fid_antisym == b.summary.fid_antisym);
    CHECK(a.summary.final_norm == b.summary.final_norm);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.records.back().rho_rl == b.records.back().rho_rl);
}

TEST_CASE("norm is preserved through a full run") {
    const RunResult r = run_protocol(quick_config());
    CHECK(r.summary.final_norm == doctest::Approx(1.0).epsilon(1e-9));
    // population conservation at every snapshot
    for (const auto& rec : r.records) {
        const double total = rec.rho_l + rec.rho_m + rec.rho_rl + rec.rho_rr;
        CHECK(std::abs(total - 1.0) < 1e-6);
    }
}

TEST_CASE("single-point sweep equals the direct run") {
    ExperimentConfig cfg = quick_config();
    cfg.sweep_axis = "detuning_fraction";
    cfg.sweep_values = {0.02};
    const auto sweep = run_sweep(cfg);
    REQUIRE(sweep.size() == 1);
    REQUIRE(sweep[0].ok());

    ExperimentConfig direct = quick_config();
    direct.detuning_fraction = 0.02;
    const RunResult r = run_protocol(direct);
    CHECK(sweep[0].summary.transfer == r.summary.transfer);
    CHECK(sweep[0].summary.fid_antisym == r.summary.fid_antisym);
}

TEST_CASE("sweep records per-point failures and continues") {
    ExperimentConfig cfg = quick_config();
    cfg.sweep_axis = "d_R";
    cfg.sweep_values = {1.5, 0.5, 1.6};  // middle value violates d_R > 1
    const auto sweep = run_sweep(cfg);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].ok());
    CHECK_FALSE(sweep[1].ok());
    CHECK(sweep[2].ok());
}

TEST_CASE("config ini round-trips through text") {
    ExperimentConfig cfg = quick_config();
    cfg.detuning_fraction = -0.037251;
    cfg.label = "roundtrip";
    cfg.sweep_axis = "T0_scale";
    cfg.sweep_values = {0.5, 1.0, 1.5};
    const std::string ini = config_to_ini(cfg);

    const auto tmp = std::filesystem::temp_directory_path() / "sapsim_cfg_test.ini";
    {
        std::ofstream f(tmp);
        f << ini;
    }
    const ExperimentConfig back = config_from_ini_file(tmp.string());
    CHECK(back.branch == cfg.branch);
    CHECK(back.detuning_fraction == cfg.detuning_fraction);
    CHECK(back.protocol_periods == cfg.protocol_periods);
    CHECK(back.grid_n == cfg.grid_n);
    CHECK(back.dt_factor == cfg.dt_factor);
    CHECK(back.sweep_axis == cfg.sweep_axis);
    CHECK(back.sweep_values == cfg.sweep_values);
    CHECK(back.label == cfg.label);
    std::filesystem::remove(tmp);
}

TEST_CASE("emit_report writes the expected files") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "sapsim_report_test";
    fs::remove_all(dir);

    ExperimentConfig cfg = quick_config();
    cfg.label = "probe";
    RunResult r = run_protocol(cfg);
    emit_report({std::move(r)}, dir.string());

    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "sweep_summary.csv"));
    CHECK(fs::exists(dir / "probe_config.ini"));
    CHECK(fs::exists(dir / "probe_timeseries.csv"));
    CHECK(fs::exists(dir / "probe_snapshot.csv"));

    // snapshot row count equals the grid size (plus header)
    std::ifstream snap(dir / "probe_snapshot.csv");
    int lines = 0;
    std::string line;
    while (std::getline(snap, line)) ++lines;
    CHECK(lines == cfg.grid_n + 1);
    fs::remove_all(dir);
}

TEST_CASE("emit_report with no results writes header-only csv") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "sapsim_empty_report";
    fs::remove_all(dir);
    emit_report({}, dir.string());
    std::ifstream f(dir / "sweep_summary.csv");
    int lines = 0;
    std::string line;
    while (std::getline(f, line)) ++lines;
    CHECK(lines == 1);
    fs::remove_all(dir);
}

TEST_CASE("unwritable output path raises an io error") {
    ExperimentConfig cfg = quick_config();
    RunResult r = run_protocol(cfg);
    CHECK_THROWS_AS(emit_report({std::move(r)}, "/proc/definitely/not/writable"), IoError);
}

TEST_CASE("branch names parse in both notations") {
    CHECK(branch_from_name("+") == Branch::antisymmetric);
    CHECK(branch_from_name("-") == Branch::symmetric);
    CHECK(branch_from_name("antisym") == Branch::antisymmetric);
    CHECK(branch_from_name("symmetric") == Branch::symmetric);
    CHECK_THROWS_AS(branch_from_name("diagonal"), ConfigError);
}

TEST_CASE("transfer is robust across d_R and delay fraction") {
    // the mixing-angle coverage scales with delta_t * (d0 - d_min), so the
    // rest separation (and for the smallest delay also the protocol time)
    // must grow as the delay fraction shrinks
    struct Point {
        double d_R, frac, d0, periods;
        int n;
        double half_width;
    };
    const Point grid[] = {
        {1.3, 0.05, 7.0, 40.0, 2560, 30.0}, {1.3, 0.1, 0.0, 0.0, 2048, 24.0},
        {1.3, 0.2, 3.45, 0.0, 2048, 24.0},  {1.5, 0.05, 7.0, 40.0, 2560, 30.0},
        {1.5, 0.1, 0.0, 0.0, 2048, 24.0},   {1.5, 0.2, 3.45, 0.0, 2048, 24.0},
        {1.8, 0.05, 7.0, 40.0, 2560, 30.0}, {1.8, 0.1, 0.0, 0.0, 2048, 24.0},
        {1.8, 0.2, 3.45, 0.0, 2048, 24.0},
    };
    for (const Point& p : grid) {
        ExperimentConfig cfg;
        cfg.branch = Branch::antisymmetric;
        cfg.d_R = p.d_R;
        cfg.delta_t_fraction = p.frac;
        cfg.d0_factor = p.d0;
        cfg.protocol_periods = p.periods;
        cfg.grid_n = p.n;
        cfg.grid_half_width = p.half_width;
        cfg.hold_periods = 0.0;
        const RunResult r = run_protocol(cfg);
        INFO("d_R = ", p.d_R, " delta_t/T = ", p.frac);
        CHECK(r.summary.transfer > 0.99);
    }
}
