#pragma once

#include <string>
#include <vector>

#include "tgf/control.hpp"
#include "tgf/io.hpp"

namespace tgf {

/// One measured quantity of a verification suite against its tolerance.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

bool all_pass(const std::vector<CheckResult>& r);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// int |u_i d_i v_j w_j| dx: the scale used for relative trilinear identities.
double trilinear_abs(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// Trilinear, Stokes-orthogonality, J/K energy identities, Leray symmetry and
/// the transport identity on `count` random fields of the config grid.
std::vector<CheckResult> check_invariants(const RunConfig& cfg, int count = 100);

/// Transport identity on a shear mode and on random fields.
std::vector<CheckResult> check_identity(const RunConfig& cfg, int count = 20);

/// Pathwise duality at steps/4, steps/2, steps (z drawn at the finest level).
std::vector<CheckResult> check_duality(const RunConfig& cfg);

/// Finite-difference vs adjoint directional derivative in the deterministic
/// mode, plus linear scaling of the state perturbation.
std::vector<CheckResult> check_gradient(const RunConfig& cfg);

/// Exact OU decay and stationary variances of five modes.
std::vector<CheckResult> check_ou_stats(const RunConfig& cfg, int steps = 100000);

/// sup_t ||A(v(f + delta psi) - v(f))||_2 in the deterministic mode.
double stability_gap(const ControlProblem& problem, const Trajectory& f, const Trajectory& psi, double delta);

/// Deterministic problem (sigma = 0) derived from the config.
ControlProblem deterministic_problem(const RunConfig& cfg);

/// Smooth, solenoidal test direction a(t) w1 + b(t) w2 on the given grids.
Trajectory smooth_direction(const TorusGrid& grid, const TimeGrid& time, std::uint64_t seed);

}  // namespace tgf
