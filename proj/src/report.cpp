#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sapsim/errors.hpp"
#include "sapsim/experiment.hpp"

namespace sapsim {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_values(const std::vector<double>& vs) {
    std::ostringstream os;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) os << ',';
        os << g17(vs[i]);
    }
    return os.str();
}

std::vector<double> split_values(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << content;
    if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string config_to_ini(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[run]\n";
    os << "branch = " << branch_name(cfg.branch) << "\n";
    os << "omega = " << g17(cfg.omega) << "\n";
    os << "d_R = " << g17(cfg.d_R) << "\n";
    os << "detuning_fraction = " << g17(cfg.detuning_fraction) << "\n";
    os << "T0_scale = " << g17(cfg.t0_scale) << "\n";
    os << "delta_t_fraction = " << g17(cfg.delta_t_fraction) << "\n";
    os << "d0_factor = " << g17(cfg.d0_factor) << "\n";
    os << "protocol_periods = " << g17(cfg.protocol_periods) << "\n";
    os << "hold_periods = " << g17(cfg.hold_periods) << "\n";
    os << "order = "
       << (cfg.order == PulseOrder::counter_intuitive ? "counter" : "intuitive") << "\n";
    os << "closed_form_resonance = " << (cfg.closed_form_resonance ? "true" : "false") << "\n";
    os << "\n[grid]\n";
    os << "n = " << cfg.grid_n << "\n";
    os << "half_width = " << g17(cfg.grid_half_width) << "\n";
    os << "\n[propagation]\n";
    os << "dt_factor = " << g17(cfg.dt_factor) << "\n";
    os << "record_stride = " << cfg.record_stride << "\n";
    if (!cfg.sweep_axis.empty()) {
        os << "\n[sweep]\n";
        os << "axis = " << cfg.sweep_axis << "\n";
        os << "values = " << join_values(cfg.sweep_values) << "\n";
    }
    os << "\n[output]\n";
    os << "dir = " << cfg.output_dir << "\n";
    os << "label = " << cfg.label << "\n";
    os << "workers = " << cfg.workers << "\n";
    return os.str();
}

ExperimentConfig config_from_ini_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line, section;
    while (std::getline(f, line)) {
        const auto hash = line.find_first_of(";#");
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
        kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    ExperimentConfig cfg;
    auto get = [&](const std::string& key, auto setter) {
        auto it = kv.find(key);
        if (it != kv.end()) setter(it->second);
    };
    auto as_double = [](const std::string& s) { return std::stod(s); };
    auto as_int = [](const std::string& s) { return std::stoi(s); };

    get("run.branch", [&](const std::string& v) { cfg.branch = branch_from_name(v); });
    get("run.omega", [&](const std::string& v) { cfg.omega = as_double(v); });
    get("run.d_R", [&](const std::string& v) { cfg.d_R = as_double(v); });
    get("run.detuning_fraction",
        [&](const std::string& v) { cfg.detuning_fraction = as_double(v); });
    get("run.T0_scale", [&](const std::string& v) { cfg.t0_scale = as_double(v); });
    get("run.delta_t_fraction",
        [&](const std::string& v) { cfg.delta_t_fraction = as_double(v); });
    get("run.d0_factor", [&](const std::string& v) { cfg.d0_factor = as_double(v); });
    get("run.protocol_periods",
        [&](const std::string& v) { cfg.protocol_periods = as_double(v); });
    get("run.hold_periods", [&](const std::string& v) { cfg.hold_periods = as_double(v); });
    get("run.order", [&](const std::string& v) {
        if (v == "counter")
            cfg.order = PulseOrder::counter_intuitive;
        else if (v == "intuitive")
            cfg.order = PulseOrder::intuitive;
        else
            throw ConfigError("order must be counter|intuitive");
    });
    get("run.closed_form_resonance",
        [&](const std::string& v) { cfg.closed_form_resonance = (v == "true" || v == "1"); });
    get("grid.n", [&](const std::string& v) { cfg.grid_n = as_int(v); });
    get("grid.half_width", [&](const std::string& v) { cfg.grid_half_width = as_double(v); });
    get("propagation.dt_factor", [&](const std::string& v) { cfg.dt_factor = as_double(v); });
    get("propagation.record_stride",
        [&](const std::string& v) { cfg.record_stride = as_int(v); });
    get("sweep.axis", [&](const std::string& v) { cfg.sweep_axis = v; });
    get("sweep.values", [&](const std::string& v) { cfg.sweep_values = split_values(v); });
    get("output.dir", [&](const std::string& v) { cfg.output_dir = v; });
    get("output.label", [&](const std::string& v) { cfg.label = v; });
    get("output.workers", [&](const std::string& v) { cfg.workers = as_int(v); });
    return cfg;
}

namespace {

nlohmann::json summary_json(const RunResult& r) {
    nlohmann::json j;
    j["label"] = r.config.label;
    j["error"] = r.error;
    if (!r.ok()) return j;
    j["omega_R"] = r.protocol.layout.omega_R;
    j["omega_R_resonant"] = r.protocol.omega_R_resonant;
    j["nu_R"] = r.protocol.nu_R;
    j["T"] = r.protocol.schedule.T;
    j["delta_t"] = r.protocol.schedule.delta_t;
    j["transfer"] = r.summary.transfer;
    j["rho_L"] = r.summary.rho_l;
    j["rho_M"] = r.summary.rho_m;
    j["rho_RL"] = r.summary.rho_rl;
    j["rho_RR"] = r.summary.rho_rr;
    j["max_rho_M"] = r.summary.max_rho_m;
    j["S_R"] = r.summary.s_r;
    j["S_I"] = r.summary.s_i;
    j["fid_sym"] = r.summary.fid_sym;
    j["fid_antisym"] = r.summary.fid_antisym;
    if (r.summary.imbalance_amplitude)
        j["imbalance_amplitude"] = *r.summary.imbalance_amplitude;
    j["final_norm"] = r.summary.final_norm;
    j["max_boundary_leak"] = r.summary.max_boundary_leak;
    j["adiabaticity_trap_ratio"] = r.adiabaticity.trap_ratio;
    j["adiabaticity_tunneling_ratio"] = r.adiabaticity.tunneling_ratio;
    j["model_final_populations"] = r.model.final_populations;
    j["model_max_middle"] = r.model.max_middle;
    j["model_phase_rl_minus_rr"] = r.model.phase_rl_minus_rr;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

}  // namespace

void emit_report(const std::vector<RunResult>& results, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());

    // sweep summary (also written for single runs; one row per run)
    std::ostringstream summary;
    summary << "index,label,axis,value,error,transfer,rho_L,rho_M,rho_RL,rho_RR,max_rho_M,"
               "S_R,S_I,fid_sym,fid_antisym,imbalance,final_norm\n";
    std::string axis;
    for (const auto& r : results)
        if (!r.config.sweep_axis.empty()) {
            axis = r.config.sweep_axis;
            break;
        }
    auto axis_value = [&](const ExperimentConfig& c) {
        if (axis == "detuning_fraction") return c.detuning_fraction;
        if (axis == "T0_scale") return c.t0_scale;
        if (axis == "d_R") return c.d_R;
        if (axis == "delta_t_fraction") return c.delta_t_fraction;
        return 0.0;
    };
    for (size_t i = 0; i < results.size(); ++i) {
        const RunResult& r = results[i];
        const ExperimentConfig& c = r.config;
        summary << i << ',' << c.label << ',' << axis << ',' << g17(axis_value(c)) << ','
                << (r.ok() ? "" : "\"" + r.error + "\"") << ',';
        if (r.ok()) {
            summary << g17(r.summary.transfer) << ',' << g17(r.summary.rho_l) << ','
                    << g17(r.summary.rho_m) << ',' << g17(r.summary.rho_rl) << ','
                    << g17(r.summary.rho_rr) << ',' << g17(r.summary.max_rho_m) << ','
                    << g17(r.summary.s_r) << ',' << g17(r.summary.s_i) << ','
                    << g17(r.summary.fid_sym) << ',' << g17(r.summary.fid_antisym) << ','
                    << (r.summary.imbalance_amplitude ? g17(*r.summary.imbalance_amplitude)
                                                      : std::string())
                    << ',' << g17(r.summary.final_norm);
        } else {
            summary << ",,,,,,,,,,,";
        }
        summary << '\n';
    }
    write_file(fs::path(dir) / "sweep_summary.csv", summary.str());

    nlohmann::json manifest;
    manifest["tool"] = "sapsim";
    manifest["version"] = "0.1.0";
    manifest["runs"] = nlohmann::json::array();

    for (size_t i = 0; i < results.size(); ++i) {
        const RunResult& r = results[i];
        const std::string stem = r.config.label.empty() ? ("run_" + std::to_string(i))
                                                        : r.config.label;
        write_file(fs::path(dir) / (stem + "_config.ini"), config_to_ini(r.config));
        manifest["runs"].push_back(summary_json(r));
        if (!r.ok()) continue;

        std::ostringstream ts;
        ts << diagnostics_csv_header() << '\n';
        for (const auto& rec : r.records) ts << diagnostics_csv_row(rec) << '\n';
        write_file(fs::path(dir) / (stem + "_timeseries.csv"), ts.str());

        std::ostringstream snap;
        snap << "x,re_psi,im_psi,density\n";
        const Wavefunction& w = r.final_state;
        for (int k = 0; k < w.grid.n(); ++k) {
            snap << g17(w.grid.x(k)) << ',' << g17(w.amp[k].real()) << ','
                 << g17(w.amp[k].imag()) << ',' << g17(std::norm(w.amp[k])) << '\n';
        }
        write_file(fs::path(dir) / (stem + "_snapshot.csv"), snap.str());
    }

    write_file(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace sapsim
