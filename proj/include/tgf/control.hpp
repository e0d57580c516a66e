#pragma once

#include <cstdint>
#include <vector>

#include "tgf/errors.hpp"
#include "tgf/field.hpp"
#include "tgf/grid.hpp"
#include "tgf/noise.hpp"
#include "tgf/trajectory.hpp"

namespace tgf {

/// Deterministic forcing f(t_n) with the radius of the admissible ball in L^2(0,T; H^1).
struct Control {
  Trajectory f;
  double radius = 0.0;
};

struct ControlProblem {
  FluidParams params;
  NoiseSpec noise;   // sigma = 0 selects the deterministic single-path mode
  SpectralField v0;
  Trajectory target; // v_d on the control time grid
  double lambda = 1.0;
  double radius = 1.0;
  int samples = 1;

  const TimeGrid& time() const { return target.time(); }
  const TorusGrid& grid() const { return target.grid(); }
  /// Number of Monte-Carlo paths actually used (1 when sigma = 0).
  int effective_samples() const { return noise.sigma == 0.0 ? 1 : samples; }
  /// Throws std::invalid_argument on inconsistent data.
  void validate() const;
};

struct CostEstimate {
  double J = 0.0;
  double stderr_J = 0.0;
  std::vector<double> per_sample;
};

/// J = 1/2 E int ||v - v_d||^2 dt + lambda/2 int ||f||^2 dt, trapezoidal in time.
CostEstimate cost_J(const Trajectory& f, const std::vector<Trajectory>& v_samples, const Trajectory& v_d,
                    double lambda);

/// ||f||_{L^2(0,T; H^1)}.
double control_norm(const Trajectory& f);

/// Radial rescaling onto the ball of the given radius.
Trajectory project_admissible(const Trajectory& f, double radius);

/// ||f - project_admissible(f - grad)||_{L^2(0,T; L^2)}.
double optimality_residual(const Trajectory& f, const Trajectory& grad, double radius);

/// State paths v_s for every sample under control f; z paths are regenerated
/// from the counter-based stream, so repeated calls see identical noise.
struct StateSamples {
  std::vector<Trajectory> v;
  int failed = 0;
};
StateSamples solve_samples(const ControlProblem& problem, const Trajectory& f);

struct GradientResult {
  Trajectory grad;
  CostEstimate cost;
  int failed_samples = 0;
};

/// grad = P mean_s p_s + lambda f, with p_s the adjoint for g = v_s - v_d.
/// Throws NonFiniteError if more than 10% of samples fail.
GradientResult gradient_estimate(const ControlProblem& problem, const Trajectory& f);
/// Same, reusing already solved state paths.
GradientResult gradient_from_states(const ControlProblem& problem, const Trajectory& f, const StateSamples& states);

struct OptimizerOptions {
  int max_iters = 200;
  double step0 = 1.0;       // first trial step is step0 / lambda
  double armijo_c = 1e-4;
  double tol_residual = 0.0; // absolute stop on the optimality residual
  double min_step = 1e-12;
};

struct IterationRecord {
  int iter = 0;
  double J = 0.0;
  double stderr_J = 0.0;
  double grad_norm = 0.0;
  double residual = 0.0;
  double step = 0.0;
  double wall_time = 0.0;
};

struct OptimizerState {
  Trajectory f;
  Trajectory grad;
  std::vector<IterationRecord> history;
  double step = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Monte-Carlo projected gradient with Armijo backtracking on the sample-average
/// cost. Throws StepCollapseError when the step falls below min_step.
OptimizerState optimize(const ControlProblem& problem, const Trajectory& f0, const OptimizerOptions& opts);

}  // namespace tgf
