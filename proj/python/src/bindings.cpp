// Python bindings: grids, fields, solvers, optimizer and verification suites.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tgf/control.hpp"
#include "tgf/io.hpp"
#include "tgf/noise.hpp"
#include "tgf/operators.hpp"
#include "tgf/random_fields.hpp"
#include "tgf/sensitivity.hpp"
#include "tgf/state_solver.hpp"
#include "tgf/verify.hpp"

namespace py = pybind11;
using namespace tgf;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

/// Coefficients as a (components, N, N) array indexed by mode slots.
CArray field_to_array(const SpectralField& s) {
  const py::ssize_t n = s.grid().modes();
  CArray out({static_cast<py::ssize_t>(s.components()), n, n});
  std::copy(s.data().begin(), s.data().end(), out.mutable_data());
  return out;
}

SpectralField field_from_array(const TorusGrid& grid, const CArray& a) {
  if (a.ndim() != 3 || a.shape(1) != grid.modes() || a.shape(2) != grid.modes()) {
    throw std::invalid_argument("expected an array of shape (components, N, N)");
  }
  SpectralField s(grid, static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), s.data().begin());
  s.truncate();
  return s;
}

/// Snapshots as a (steps + 1, 2, N, N) array.
CArray trajectory_to_array(const Trajectory& t) {
  const py::ssize_t n = t.grid().modes();
  CArray out({static_cast<py::ssize_t>(t.size()), py::ssize_t{2}, n, n});
  cplx* dst = out.mutable_data();
  for (std::size_t i = 0; i < t.size(); ++i) dst = std::copy(t[i].data().begin(), t[i].data().end(), dst);
  return out;
}

Trajectory trajectory_from_array(const TorusGrid& grid, const TimeGrid& time, Role role, const CArray& a) {
  if (a.ndim() != 4 || a.shape(0) != time.steps() + 1 || a.shape(1) != 2 || a.shape(2) != grid.modes() ||
      a.shape(3) != grid.modes()) {
    throw std::invalid_argument("expected an array of shape (steps + 1, 2, N, N)");
  }
  std::vector<SpectralField> snaps;
  const std::size_t per = 2 * static_cast<std::size_t>(grid.slot_count());
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    SpectralField s(grid, 2);
    std::copy(a.data() + i * per, a.data() + (i + 1) * per, s.data().begin());
    s.truncate();
    snaps.push_back(std::move(s));
  }
  return Trajectory(time, role, std::move(snaps));
}

}  // namespace

PYBIND11_MODULE(_tgf, m) {
  m.doc() = "Stochastic third-grade fluid: spectral solver, sensitivities and optimal control";

  py::register_exception<NonFiniteError>(m, "NonFiniteError", PyExc_FloatingPointError);
  py::register_exception<StepCollapseError>(m, "StepCollapseError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<TorusGrid>(m, "TorusGrid")
      .def(py::init<double, int, int>(), py::arg("length"), py::arg("modes"), py::arg("points") = 0)
      .def_property_readonly("length", &TorusGrid::length)
      .def_property_readonly("modes", &TorusGrid::modes)
      .def_property_readonly("points", &TorusGrid::points)
      .def_property_readonly("lambda1", &TorusGrid::lambda1)
      .def("wavenumber", &TorusGrid::wavenumber)
      .def("active", &TorusGrid::active)
      .def("__eq__", [](const TorusGrid& a, const TorusGrid& b) { return a == b; });

  py::enum_<ThermoPolicy>(m, "ThermoPolicy").value("enforce", ThermoPolicy::enforce).value("warn", ThermoPolicy::warn);

  py::class_<FluidParams>(m, "FluidParams")
      .def(py::init<double, double, double, double, ThermoPolicy>(), py::arg("nu"), py::arg("alpha1"),
           py::arg("alpha2"), py::arg("beta"), py::arg("policy") = ThermoPolicy::enforce)
      .def_readonly("nu", &FluidParams::nu)
      .def_readonly("alpha1", &FluidParams::alpha1)
      .def_readonly("alpha2", &FluidParams::alpha2)
      .def_readonly("beta", &FluidParams::beta)
      .def("thermo_bound", &FluidParams::thermo_bound);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<double, int>(), py::arg("T"), py::arg("steps"))
      .def_property_readonly("T", &TimeGrid::T)
      .def_property_readonly("steps", &TimeGrid::steps)
      .def_property_readonly("dt", &TimeGrid::dt);

  py::enum_<Role>(m, "Role")
      .value("state_u", Role::state_u)
      .value("noise_z", Role::noise_z)
      .value("state_v", Role::state_v)
      .value("linearized_m", Role::linearized_m)
      .value("adjoint_p", Role::adjoint_p)
      .value("target_vd", Role::target_vd)
      .value("control_f", Role::control_f);

  py::class_<SpectralField>(m, "SpectralField")
      .def(py::init<const TorusGrid&, int>(), py::arg("grid"), py::arg("components") = 2)
      .def_static("from_array", &field_from_array, py::arg("grid"), py::arg("coefficients"))
      .def("to_array", &field_to_array)
      .def_property_readonly("grid", &SpectralField::grid)
      .def("mode", [](const SpectralField& s, int c, int k1, int k2) { return s.mode(c, k1, k2); })
      .def("set_mode", [](SpectralField& s, int c, int k1, int k2, cplx v) { s.mode(c, k1, k2) = v; })
      .def("divergence_residual", &SpectralField::divergence_residual)
      .def("hermitian_residual", &SpectralField::hermitian_residual)
      .def("__add__", [](const SpectralField& a, const SpectralField& b) { return a + b; })
      .def("__sub__", [](const SpectralField& a, const SpectralField& b) { return a - b; })
      .def("__mul__", [](const SpectralField& a, double s) { return a * s; })
      .def("__rmul__", [](const SpectralField& a, double s) { return a * s; });

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<const TorusGrid&, const TimeGrid&, Role>())
      .def_static("from_array", &trajectory_from_array, py::arg("grid"), py::arg("time"), py::arg("role"),
                  py::arg("coefficients"))
      .def("to_array", &trajectory_to_array)
      .def_property_readonly("grid", &Trajectory::grid)
      .def_property_readonly("time", &Trajectory::time)
      .def_property_readonly("role", &Trajectory::role)
      .def("__len__", &Trajectory::size)
      .def("__getitem__", [](const Trajectory& t, std::size_t n) {
        if (n >= t.size()) throw py::index_error();
        return t[n];
      });

  m.def("random_solenoidal", &random_solenoidal, py::arg("grid"), py::arg("band"), py::arg("seed"),
        py::arg("amplitude") = 1.0, py::arg("decay") = 2.0);
  m.def("leray_project", &leray_project);
  m.def("stokes_apply", &stokes_apply);
  m.def("trilinear_b", &trilinear_b);
  m.def("transport_B", &transport_B);
  m.def("op_J", &op_J);
  m.def("op_K", &op_K);
  m.def("inner", &inner);
  m.def("hs_seminorm", &hs_seminorm);
  m.def("rivlin_l4_pow4", &rivlin_l4_pow4);
  m.def("check_transport_identity", &check_transport_identity);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init<>())
      .def_readwrite("sigma", &NoiseSpec::sigma)
      .def_readwrite("s", &NoiseSpec::s)
      .def_readwrite("gamma", &NoiseSpec::gamma)
      .def_readwrite("theta", &NoiseSpec::theta)
      .def_readwrite("cutoff", &NoiseSpec::cutoff)
      .def_readwrite("master_seed", &NoiseSpec::master_seed)
      .def_readwrite("c_hat", &NoiseSpec::c_hat)
      .def("validate", &NoiseSpec::validate)
      .def("variance", &NoiseSpec::variance);

  py::class_<TraceDiagnostics>(m, "TraceDiagnostics")
      .def_readonly("tr_gg", &TraceDiagnostics::tr_gg)
      .def_readonly("tr_weighted_reg", &TraceDiagnostics::tr_weighted_reg)
      .def_readonly("op_norm", &TraceDiagnostics::op_norm)
      .def_readonly("min_theta", &TraceDiagnostics::min_theta);
  m.def("trace_diagnostics", &trace_diagnostics);
  m.def("noise_trajectory", &noise_trajectory, py::arg("spec"), py::arg("alpha1"), py::arg("grid"), py::arg("time"),
        py::arg("sample"));

  py::class_<StateRunReport>(m, "StateRunReport")
      .def_readonly("t", &StateRunReport::t)
      .def_readonly("u_l2sq", &StateRunReport::u_l2sq)
      .def_readonly("u_grad_l2sq", &StateRunReport::u_grad_l2sq)
      .def_readonly("Au_l2sq", &StateRunReport::Au_l2sq)
      .def_readonly("A32u_l2sq", &StateRunReport::A32u_l2sq)
      .def_readonly("Av_L4_4", &StateRunReport::Av_L4_4)
      .def_readonly("energy_residual", &StateRunReport::energy_residual);
  py::class_<StateSolution>(m, "StateSolution")
      .def_readonly("u", &StateSolution::u)
      .def_readonly("report", &StateSolution::report);
  m.def("solve_state", &solve_state, py::arg("v0"), py::arg("f"), py::arg("z"), py::arg("params"),
        py::arg("theta"), py::arg("with_report") = true, py::call_guard<py::gil_scoped_release>());
  m.def("solve_state_direct", &solve_state_direct, py::call_guard<py::gil_scoped_release>());
  m.def("reconstruct_v", &reconstruct_v);

  m.def(
      "solve_linearized",
      [](const Trajectory& v, const FluidParams& p, const Trajectory& psi) {
        return solve_linearized(FrozenState(v, p), psi);
      },
      py::arg("v"), py::arg("params"), py::arg("psi"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve_adjoint",
      [](const Trajectory& v, const FluidParams& p, const Trajectory& g) {
        return solve_adjoint(FrozenState(v, p), g);
      },
      py::arg("v"), py::arg("params"), py::arg("g"), py::call_guard<py::gil_scoped_release>());
  py::class_<DualityResult>(m, "DualityResult")
      .def_readonly("lhs", &DualityResult::lhs)
      .def_readonly("rhs", &DualityResult::rhs)
      .def_readonly("rel_residual", &DualityResult::rel_residual);
  m.def(
      "duality_residual",
      [](const Trajectory& v, const FluidParams& p, const Trajectory& psi, const Trajectory& g) {
        return duality_residual(FrozenState(v, p), psi, g);
      },
      py::arg("v"), py::arg("params"), py::arg("psi"), py::arg("g"), py::call_guard<py::gil_scoped_release>());

  py::class_<CostEstimate>(m, "CostEstimate")
      .def_readonly("J", &CostEstimate::J)
      .def_readonly("stderr_J", &CostEstimate::stderr_J)
      .def_readonly("per_sample", &CostEstimate::per_sample);
  py::class_<ControlProblem>(m, "ControlProblem")
      .def_readonly("params", &ControlProblem::params)
      .def_readonly("noise", &ControlProblem::noise)
      .def_readonly("v0", &ControlProblem::v0)
      .def_readonly("target", &ControlProblem::target)
      .def_readwrite("lambda_", &ControlProblem::lambda)
      .def_readwrite("radius", &ControlProblem::radius)
      .def_readwrite("samples", &ControlProblem::samples);
  py::class_<GradientResult>(m, "GradientResult")
      .def_readonly("grad", &GradientResult::grad)
      .def_readonly("cost", &GradientResult::cost)
      .def_readonly("failed_samples", &GradientResult::failed_samples);
  m.def("gradient_estimate", &gradient_estimate, py::call_guard<py::gil_scoped_release>());
  m.def(
      "cost",
      [](const ControlProblem& p, const Trajectory& f) {
        return cost_J(f, solve_samples(p, f).v, p.target, p.lambda);
      },
      py::call_guard<py::gil_scoped_release>());
  m.def("control_norm", &control_norm);
  m.def("project_admissible", &project_admissible);
  m.def("optimality_residual", &optimality_residual);

  py::class_<OptimizerOptions>(m, "OptimizerOptions")
      .def(py::init<>())
      .def_readwrite("max_iters", &OptimizerOptions::max_iters)
      .def_readwrite("step0", &OptimizerOptions::step0)
      .def_readwrite("armijo_c", &OptimizerOptions::armijo_c)
      .def_readwrite("tol_residual", &OptimizerOptions::tol_residual)
      .def_readwrite("min_step", &OptimizerOptions::min_step);
  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iter", &IterationRecord::iter)
      .def_readonly("J", &IterationRecord::J)
      .def_readonly("stderr_J", &IterationRecord::stderr_J)
      .def_readonly("grad_norm", &IterationRecord::grad_norm)
      .def_readonly("residual", &IterationRecord::residual)
      .def_readonly("step", &IterationRecord::step)
      .def_readonly("wall_time", &IterationRecord::wall_time);
  py::class_<OptimizerState>(m, "OptimizerState")
      .def_readonly("f", &OptimizerState::f)
      .def_readonly("grad", &OptimizerState::grad)
      .def_readonly("history", &OptimizerState::history)
      .def_readonly("iterations", &OptimizerState::iterations)
      .def_readonly("converged", &OptimizerState::converged);
  m.def("optimize", &optimize, py::arg("problem"), py::arg("f0"), py::arg("options") = OptimizerOptions{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("grid", &RunConfig::grid)
      .def_readonly("time", &RunConfig::time)
      .def_readonly("fluid", &RunConfig::fluid)
      .def_readonly("noise", &RunConfig::noise)
      .def_readonly("lambda_", &RunConfig::lambda)
      .def_readonly("radius", &RunConfig::radius)
      .def_readonly("samples", &RunConfig::samples)
      .def_readonly("optimizer", &RunConfig::optimizer);
  m.def("parse_config", &parse_config, py::arg("json_text"), py::arg("base_dir") = std::filesystem::path{});
  m.def("load_config", &load_config);
  m.def("initial_state", &initial_state);
  m.def("synthetic_control", &synthetic_control);
  m.def("build_target", &build_target);
  m.def("build_problem", &build_problem);
  m.def("write_trajectory", &write_trajectory);
  m.def("read_trajectory", &read_trajectory);

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("measured", &CheckResult::measured)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("passed", &CheckResult::pass)
      .def_readonly("note", &CheckResult::note);
  m.def("check_invariants", &check_invariants, py::arg("config"), py::arg("count") = 100);
  m.def("check_duality", &check_duality, py::call_guard<py::gil_scoped_release>());
  m.def("check_gradient", &check_gradient, py::call_guard<py::gil_scoped_release>());
  m.def("check_ou_stats", &check_ou_stats, py::arg("config"), py::arg("steps") = 100000);
}
