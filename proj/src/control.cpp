#include "tgf/control.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "tgf/operators.hpp"
#include "tgf/parallel.hpp"
#include "tgf/sensitivity.hpp"
#include "tgf/state_solver.hpp"

namespace tgf {

void ControlProblem::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("control.lambda must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("control.radius_R must be positive");
  if (samples < 1) throw std::invalid_argument("control.samples must be >= 1");
  if (!(v0.grid() == target.grid())) throw std::invalid_argument("initial state and target grids differ");
}

CostEstimate cost_J(const Trajectory& f, const std::vector<Trajectory>& v_samples, const Trajectory& v_d,
                    double lambda) {
  CostEstimate c;
  const double reg = 0.5 * lambda * time_norm_sq(f, 0.0);
  for (const Trajectory& v : v_samples) {
    Trajectory d = v.relabeled(v_d.role());
    d -= v_d;
    c.per_sample.push_back(0.5 * time_norm_sq(d, 0.0) + reg);
  }
  const double n = static_cast<double>(c.per_sample.size());
  if (n == 0.0) return c;
  double mean = 0.0;
  for (double j : c.per_sample) mean += j;
  mean /= n;
  c.J = mean;
  if (n > 1.0) {
    double var = 0.0;
    for (double j : c.per_sample) var += (j - mean) * (j - mean);
    c.stderr_J = std::sqrt(var / (n - 1.0) / n);
  }
  return c;
}

double control_norm(const Trajectory& f) { return std::sqrt(time_norm_sq(f, 1.0)); }

Trajectory project_admissible(const Trajectory& f, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_admissible: radius must be positive");
  const double n = control_norm(f);
  if (n <= radius) return f;
  Trajectory out = f;
  out *= radius / n;
  return out;
}

double optimality_residual(const Trajectory& f, const Trajectory& grad, double radius) {
  Trajectory trial = f;
  trial -= grad;
  Trajectory d = f;
  d -= project_admissible(trial, radius);
  return std::sqrt(time_norm_sq(d, 0.0));
}

namespace {

void check_failures(int failed, int total) {
  if (10 * failed > total) {
    throw NonFiniteError("Monte-Carlo estimate (" + std::to_string(failed) + " of " + std::to_string(total) +
                             " samples failed)",
                         -1);
  }
}

}  // namespace

StateSamples solve_samples(const ControlProblem& problem, const Trajectory& f) {
  const int S = problem.effective_samples();
  std::vector<Trajectory> v(S);
  std::vector<char> ok(S, 0);
  parallel_for(static_cast<std::size_t>(S), [&](std::size_t s) {
    try {
      const Trajectory z = noise_trajectory(problem.noise, problem.params.alpha1, problem.grid(), problem.time(), s);
      const StateSolution sol = solve_state(problem.v0, f, z, problem.params, problem.noise.theta, false);
      v[s] = reconstruct_v(sol.u, z);
      ok[s] = 1;
    } catch (const NonFiniteError&) {
    }
  });
  StateSamples out;
  for (int s = 0; s < S; ++s) {
    if (ok[s]) {
      out.v.push_back(std::move(v[s]));
    } else {
      ++out.failed;
    }
  }
  check_failures(out.failed, S);
  return out;
}

GradientResult gradient_from_states(const ControlProblem& problem, const Trajectory& f, const StateSamples& states) {
  GradientResult r;
  r.cost = cost_J(f, states.v, problem.target, problem.lambda);
  const std::size_t S = states.v.size();
  std::vector<Trajectory> p(S);
  std::vector<char> ok(S, 0);
  parallel_for(S, [&](std::size_t s) {
    try {
      Trajectory g = states.v[s].relabeled(Role::adjoint_p);
      g -= problem.target.relabeled(Role::adjoint_p);
      p[s] = solve_adjoint(FrozenState(states.v[s], problem.params), g);
      ok[s] = 1;
    } catch (const NonFiniteError&) {
    }
  });
  Trajectory mean(problem.grid(), problem.time(), Role::control_f);
  int used = 0;
  for (std::size_t s = 0; s < S; ++s) {
    if (!ok[s]) continue;
    mean += p[s].relabeled(Role::control_f);
    ++used;
  }
  r.failed_samples = states.failed + static_cast<int>(S) - used;
  check_failures(r.failed_samples, problem.effective_samples());
  mean *= 1.0 / used;
  for (std::size_t n = 0; n < mean.size(); ++n) mean[n] = leray_project(mean[n]);
  mean.axpy(problem.lambda, f.relabeled(Role::control_f));
  r.grad = std::move(mean);
  return r;
}

GradientResult gradient_estimate(const ControlProblem& problem, const Trajectory& f) {
  return gradient_from_states(problem, f, solve_samples(problem, f));
}

OptimizerState optimize(const ControlProblem& problem, const Trajectory& f0, const OptimizerOptions& opts) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  OptimizerState st;
  st.f = project_admissible(leray_projected(f0).relabeled(Role::control_f), problem.radius);
  StateSamples states = solve_samples(problem, st.f);
  GradientResult gr = gradient_from_states(problem, st.f, states);
  const double max_step = opts.step0 / problem.lambda;
  double step = max_step;

  auto record = [&](int iter, double used_step) {
    IterationRecord rec;
    rec.iter = iter;
    rec.J = gr.cost.J;
    rec.stderr_J = gr.cost.stderr_J;
    rec.grad_norm = std::sqrt(time_norm_sq(gr.grad, 0.0));
    rec.residual = optimality_residual(st.f, gr.grad, problem.radius);
    rec.step = used_step;
    rec.wall_time = elapsed();
    st.history.push_back(rec);
    return rec.residual;
  };

  double residual = record(0, 0.0);
  for (int it = 1; it <= opts.max_iters; ++it) {
    if (residual <= opts.tol_residual) {
      st.converged = true;
      break;
    }
    bool accepted = false;
    Trajectory trial_f;
    StateSamples trial_states;
    CostEstimate trial_cost;
    while (!accepted) {
      if (step < opts.min_step) throw StepCollapseError(it, step);
      trial_f = st.f;
      trial_f.axpy(-step, gr.grad);
      trial_f = project_admissible(trial_f, problem.radius);
      Trajectory delta = trial_f;
      delta -= st.f;
      const double slope = time_inner(gr.grad, delta);
      try {
        trial_states = solve_samples(problem, trial_f);
        trial_cost = cost_J(trial_f, trial_states.v, problem.target, problem.lambda);
        accepted = std::isfinite(trial_cost.J) && trial_cost.J <= gr.cost.J + opts.armijo_c * slope;
      } catch (const NonFiniteError&) {
        accepted = false;
      }
      if (!accepted) step *= 0.5;
    }
    const double used = step;
    st.f = std::move(trial_f);
    gr = gradient_from_states(problem, st.f, trial_states);
    residual = record(it, used);
    st.iterations = it;
    step = std::min(2.0 * used, max_step);
  }
  if (residual <= opts.tol_residual) st.converged = true;
  st.grad = gr.grad;
  st.step = step;
  return st;
}

}  // namespace tgf
