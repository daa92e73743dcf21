#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sapsim/diagnostics.hpp"
#include "sapsim/eigensolver.hpp"
#include "sapsim/errors.hpp"
#include "sapsim/experiment.hpp"
#include "sapsim/four_level.hpp"
#include "sapsim/grid.hpp"
#include "sapsim/propagator.hpp"
#include "sapsim/trap_geometry.hpp"

namespace py = pybind11;
using namespace sapsim;

namespace {

py::array_t<cplx> amplitudes_array(const Wavefunction& w) {
    py::array_t<cplx> out(w.amp.size());
    std::copy(w.amp.begin(), w.amp.end(), out.mutable_data());
    return out;
}

py::array_t<double> grid_x(const SpatialGrid& g) {
    py::array_t<double> out(g.n());
    auto* p = out.mutable_data();
    for (int i = 0; i < g.n(); ++i) p[i] = g.x(i);
    return out;
}

std::vector<double> potential_vector(const SpatialGrid& g, double t, const TrapLayout& l,
                                     const MotionSchedule& s) {
    std::vector<double> v(g.n());
    potential_on_grid(g, t, l, s, v);
    return v;
}

py::dict summary_dict(const RunResult& r) {
    py::dict d;
    d["label"] = r.config.label;
    d["error"] = r.error;
    if (!r.ok()) return d;
    d["omega_R"] = r.protocol.layout.omega_R;
    d["omega_R_resonant"] = r.protocol.omega_R_resonant;
    d["nu_R"] = r.protocol.nu_R;
    d["T"] = r.protocol.schedule.T;
    d["delta_t"] = r.protocol.schedule.delta_t;
    d["transfer"] = r.summary.transfer;
    d["rho_L"] = r.summary.rho_l;
    d["rho_M"] = r.summary.rho_m;
    d["rho_RL"] = r.summary.rho_rl;
    d["rho_RR"] = r.summary.rho_rr;
    d["max_rho_M"] = r.summary.max_rho_m;
    d["S_R"] = r.summary.s_r;
    d["S_I"] = r.summary.s_i;
    d["fid_sym"] = r.summary.fid_sym;
    d["fid_antisym"] = r.summary.fid_antisym;
    if (r.summary.imbalance_amplitude) d["imbalance_amplitude"] = *r.summary.imbalance_amplitude;
    d["final_norm"] = r.summary.final_norm;
    d["max_boundary_leak"] = r.summary.max_boundary_leak;
    d["model_final_populations"] = r.model.final_populations;
    d["model_max_middle"] = r.model.max_middle;
    d["model_phase_rl_minus_rr"] = r.model.phase_rl_minus_rr;
    d["adiabaticity_trap_ratio"] = r.adiabaticity.trap_ratio;
    d["adiabaticity_tunneling_ratio"] = r.adiabaticity.tunneling_ratio;
    d["wall_seconds"] = r.wall_seconds;
    return d;
}

py::dict run_protocol_py(const ExperimentConfig& cfg) {
    RunResult r = [&] {
        py::gil_scoped_release release;
        return run_protocol(cfg);
    }();
    py::dict d = summary_dict(r);
    d["final_state"] = r.final_state;
    py::list recs;
    for (const auto& rec : r.records) {
        py::dict e;
        e["t"] = rec.t;
        e["rho_L"] = rec.rho_l;
        e["rho_M"] = rec.rho_m;
        e["rho_RL"] = rec.rho_rl;
        e["rho_RR"] = rec.rho_rr;
        e["S_R"] = rec.s_r;
        e["S_I"] = rec.s_i;
        e["fid_sym"] = rec.fid_sym;
        e["fid_antisym"] = rec.fid_antisym;
        e["leak"] = rec.boundary_leak;
        recs.append(e);
    }
    d["records"] = recs;
    return d;
}

py::list run_sweep_py(const ExperimentConfig& cfg) {
    const auto results = [&] {
        py::gil_scoped_release release;
        return run_sweep(cfg);
    }();
    py::list out;
    for (const auto& r : results) out.append(summary_dict(r));
    return out;
}

}  // namespace

PYBIND11_MODULE(sapsim, m) {
    m.doc() = "Spatial adiabatic passage of a single atom into a double-well "
              "superposition state: split-operator dynamics, reduced four-level "
              "model and experiment harness.";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericalDomainError>(m, "NumericalDomainError");
    py::register_exception<BoundaryContaminationError>(m, "BoundaryContaminationError");
    py::register_exception<IoError>(m, "IoError");

    py::class_<SpatialGrid>(m, "SpatialGrid")
        .def(py::init<int, double, double>(), py::arg("n_points"), py::arg("x_min"),
             py::arg("x_max"))
        .def_property_readonly("n", &SpatialGrid::n)
        .def_property_readonly("dx", &SpatialGrid::dx)
        .def_property_readonly("x_min", &SpatialGrid::x_min)
        .def_property_readonly("x_max", &SpatialGrid::x_max)
        .def("x", &grid_x, "position samples as an array");

    py::class_<Wavefunction>(m, "Wavefunction")
        .def_readonly("grid", &Wavefunction::grid)
        .def_property_readonly("amplitudes", &amplitudes_array);

    m.def("make_gaussian", &make_gaussian, py::arg("grid"), py::arg("center"), py::arg("width"));
    m.def("norm", &norm);
    m.def("overlap", &overlap);
    m.def("boundary_mass", &boundary_mass);

    py::enum_<Branch>(m, "Branch")
        .value("symmetric", Branch::symmetric)
        .value("antisymmetric", Branch::antisymmetric);

    py::enum_<PulseOrder>(m, "PulseOrder")
        .value("counter_intuitive", PulseOrder::counter_intuitive)
        .value("intuitive", PulseOrder::intuitive);

    py::class_<TrapLayout>(m, "TrapLayout")
        .def(py::init<>())
        .def_readwrite("omega", &TrapLayout::omega)
        .def_readwrite("omega_R", &TrapLayout::omega_R)
        .def_readwrite("d_R", &TrapLayout::d_R)
        .def("alpha", &TrapLayout::alpha)
        .def("alpha_R", &TrapLayout::alpha_R);

    py::class_<MotionSchedule>(m, "MotionSchedule")
        .def(py::init<>())
        .def_readwrite("T", &MotionSchedule::T)
        .def_readwrite("delta_t", &MotionSchedule::delta_t)
        .def_readwrite("d_min", &MotionSchedule::d_min)
        .def_readwrite("d_lm0", &MotionSchedule::d_lm0)
        .def_readwrite("d_mr0", &MotionSchedule::d_mr0)
        .def_readwrite("order", &MotionSchedule::order)
        .def("protocol_end", &MotionSchedule::protocol_end);

    py::class_<TrapCenters>(m, "TrapCenters")
        .def_readonly("x_l", &TrapCenters::x_l)
        .def_readonly("x_m", &TrapCenters::x_m)
        .def_readonly("x_rl", &TrapCenters::x_rl)
        .def_readonly("x_rr", &TrapCenters::x_rr);

    m.def("distance_lm", &distance_lm);
    m.def("distance_mr", &distance_mr);
    m.def("centers_at", &centers_at);
    m.def("potential_at", &potential_at, py::arg("x"), py::arg("t"), py::arg("layout"),
          py::arg("schedule"));
    m.def("potential_on_grid", &potential_vector, py::arg("grid"), py::arg("t"),
          py::arg("layout"), py::arg("schedule"));

    m.def("tunneling_rate", &tunneling_rate, py::arg("d"),
          "splitting ratio of two equal wells at half-separation d (width units)");
    m.def("resonant_omega_R", &resonant_omega_R, py::arg("omega"), py::arg("d_R"),
          py::arg("branch"));
    m.def("calibrated_omega_R", &calibrated_omega_R, py::arg("omega"), py::arg("d_R"),
          py::arg("branch"));

    py::class_<CouplingSet>(m, "CouplingSet")
        .def(py::init<>())
        .def_readwrite("omega_lm", &CouplingSet::omega_lm)
        .def_readwrite("omega_mr", &CouplingSet::omega_mr)
        .def_readwrite("omega_r", &CouplingSet::omega_r)
        .def_readwrite("detuning", &CouplingSet::detuning);

    m.def("hamiltonian", [](const CouplingSet& c) {
        const Matrix4c h = hamiltonian(c);
        py::array_t<cplx> out({4, 4});
        auto a = out.mutable_unchecked<2>();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = h[i][j];
        return out;
    });

    py::class_<DarkState>(m, "DarkState")
        .def_readonly("theta", &DarkState::theta)
        .def_readonly("branch", &DarkState::branch)
        .def_property_readonly("amplitudes", [](const DarkState& d) {
            py::array_t<cplx> out(4);
            std::copy(d.amplitudes.begin(), d.amplitudes.end(), out.mutable_data());
            return out;
        });

    m.def("dark_state", &dark_state, py::arg("omega_lm"), py::arg("omega_mr"), py::arg("branch"));
    m.def("dark_state_nullity", &dark_state_nullity);
    m.def("couplings_from_geometry", &couplings_from_geometry);

    py::class_<FourLevelState>(m, "FourLevelState")
        .def(py::init<>())
        .def_readwrite("time", &FourLevelState::time)
        .def_property(
            "c",
            [](const FourLevelState& s) {
                py::array_t<cplx> out(4);
                std::copy(s.c.begin(), s.c.end(), out.mutable_data());
                return out;
            },
            [](FourLevelState& s, py::array_t<cplx> v) {
                if (v.size() != 4) throw ConfigError("four amplitudes required");
                std::copy(v.data(), v.data() + 4, s.c.begin());
            })
        .def("norm_sq", &FourLevelState::norm_sq);

    m.def("integrate_four_level", &integrate_four_level, py::arg("initial"), py::arg("layout"),
          py::arg("schedule"), py::arg("dt"), py::arg("t_final"), py::arg("record_stride") = 1);

    py::class_<RegionPartition>(m, "RegionPartition")
        .def(py::init<>())
        .def_readwrite("cut_lm", &RegionPartition::cut_lm)
        .def_readwrite("cut_mr", &RegionPartition::cut_mr)
        .def_readwrite("cut_rr", &RegionPartition::cut_rr);

    m.def("region_partition_at", &region_partition_at);
    m.def("region_populations", &region_populations);
    m.def("symmetry_functions", [](const Wavefunction& w, double window_min) {
        const SymmetryResult r = symmetry_functions(w, window_min);
        py::dict d;
        d["S_R"] = r.s_r;
        d["S_I"] = r.s_i;
        d["re_degenerate"] = r.re_degenerate;
        d["im_degenerate"] = r.im_degenerate;
        return d;
    });
    m.def("ground_states_by_diagonalization",
          [](const SpatialGrid& g, const std::vector<double>& v, int n_states) {
              const EigenResult r = ground_states_by_diagonalization(g, v, n_states);
              return py::make_tuple(r.energies, r.states, r.boundary_warning);
          });

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("branch", &ExperimentConfig::branch)
        .def_readwrite("omega", &ExperimentConfig::omega)
        .def_readwrite("d_R", &ExperimentConfig::d_R)
        .def_readwrite("detuning_fraction", &ExperimentConfig::detuning_fraction)
        .def_readwrite("t0_scale", &ExperimentConfig::t0_scale)
        .def_readwrite("delta_t_fraction", &ExperimentConfig::delta_t_fraction)
        .def_readwrite("d0_factor", &ExperimentConfig::d0_factor)
        .def_readwrite("protocol_periods", &ExperimentConfig::protocol_periods)
        .def_readwrite("hold_periods", &ExperimentConfig::hold_periods)
        .def_readwrite("order", &ExperimentConfig::order)
        .def_readwrite("closed_form_resonance", &ExperimentConfig::closed_form_resonance)
        .def_readwrite("grid_n", &ExperimentConfig::grid_n)
        .def_readwrite("grid_half_width", &ExperimentConfig::grid_half_width)
        .def_readwrite("dt_factor", &ExperimentConfig::dt_factor)
        .def_readwrite("record_stride", &ExperimentConfig::record_stride)
        .def_readwrite("workers", &ExperimentConfig::workers)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readwrite("label", &ExperimentConfig::label)
        .def_readwrite("sweep_axis", &ExperimentConfig::sweep_axis)
        .def_readwrite("sweep_values", &ExperimentConfig::sweep_values);

    m.def("check_adiabaticity", [](const ExperimentConfig& cfg) {
        const AdiabaticityReport a = check_adiabaticity(cfg);
        py::dict d;
        d["trap_ratio"] = a.trap_ratio;
        d["tunneling_ratio"] = a.tunneling_ratio;
        d["trap_ok"] = a.trap_ok;
        d["tunneling_ok"] = a.tunneling_ok;
        return d;
    });

    m.def("run_protocol", &run_protocol_py, py::arg("config"),
          "run the protocol; returns summary scalars, records and the final state");
    m.def("run_sweep", &run_sweep_py, py::arg("config"));
    m.def("emit_report_for", [](const ExperimentConfig& cfg, const std::string& dir) {
        RunResult r = run_protocol(cfg);
        emit_report({std::move(r)}, dir);
    });

    m.attr("__version__") = "0.1.0";
}
