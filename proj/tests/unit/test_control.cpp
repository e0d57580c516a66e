#include <cmath>
#include <cstdlib>
#include <numbers>

#include "doctest.h"
#include "tgf/control.hpp"
#include "tgf/operators.hpp"
#include "tgf/parallel.hpp"
#include "tgf/random_fields.hpp"

namespace {

const tgf::TorusGrid kGrid(2.0 * std::numbers::pi, 8);
const tgf::FluidParams kFluid(0.1, 0.2, 0.1872983346207417, 0.1);

tgf::ControlProblem problem(double sigma, int samples, double lambda = 1e-2) {
  const tgf::TimeGrid tg(0.2, 20);
  tgf::ControlProblem p;
  p.params = kFluid;
  p.noise.sigma = sigma;
  p.noise.master_seed = 5;
  p.v0 = tgf::random_solenoidal(kGrid, 2, 3, 0.3);
  p.target = tgf::Trajectory(kGrid, tg, tgf::Role::target_vd);
  for (std::size_t n = 0; n < p.target.size(); ++n) p.target[n] = tgf::random_solenoidal(kGrid, 2, 9, 0.5);
  p.lambda = lambda;
  p.radius = 100.0;
  p.samples = samples;
  return p;
}

tgf::Trajectory difference(tgf::Trajectory a, const tgf::Trajectory& b) {
  a -= b;
  return a;
}

}  // namespace

TEST_SUITE("control_optimizer") {
  TEST_CASE("tracking cost of a cosine mode has the closed form c^2 L^2 T / 4") {
    const double L = 3.0, c = 0.7, T = 0.6;
    const tgf::TorusGrid g(L, 8);
    const tgf::TimeGrid tg(T, 12);
    tgf::SpectralField w(g);
    w.mode(1, 1, 0) = c / 2;
    w.mode(1, -1, 0) = c / 2;
    tgf::Trajectory v(g, tg, tgf::Role::state_v);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = w;
    const tgf::Trajectory zero(g, tg, tgf::Role::target_vd);
    const tgf::Trajectory f(g, tg, tgf::Role::control_f);
    const tgf::CostEstimate J = tgf::cost_J(f, {v, v}, zero, 0.0);
    CHECK(J.J == doctest::Approx(c * c * L * L * T / 4).epsilon(1e-13));
    CHECK(J.stderr_J == doctest::Approx(0.0));
  }

  TEST_CASE("radial projection onto the H1 ball") {
    const tgf::TimeGrid tg(1.0, 4);
    tgf::Trajectory f(kGrid, tg, tgf::Role::control_f);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = tgf::random_solenoidal(kGrid, 2, n + 1);
    const double norm = tgf::control_norm(f);
    CHECK(tgf::project_admissible(f, 2 * norm) == f);
    const tgf::Trajectory p = tgf::project_admissible(f, 0.5 * norm);
    CHECK(tgf::control_norm(p) == doctest::Approx(0.5 * norm).epsilon(1e-14));
    tgf::Trajectory g = f;
    g *= 0.5;
    CHECK(tgf::time_norm_sq(difference(p, g), 0.0) < 1e-28 * tgf::time_norm_sq(f, 0.0));
  }

  TEST_CASE("optimality residual vanishes at a stationary point") {
    const tgf::TimeGrid tg(1.0, 4);
    const tgf::Trajectory zero(kGrid, tg, tgf::Role::control_f);
    CHECK(tgf::optimality_residual(zero, zero, 1.0) == 0.0);
    tgf::Trajectory grad(kGrid, tg, tgf::Role::control_f);
    for (std::size_t n = 0; n < grad.size(); ++n) grad[n] = tgf::random_solenoidal(kGrid, 2, n + 1);
    CHECK(tgf::optimality_residual(zero, grad, 1e9) == doctest::Approx(std::sqrt(tgf::time_norm_sq(grad, 0.0))));
  }

  TEST_CASE("gradient reduces to lambda f when the target is reached") {
    tgf::ControlProblem p = problem(0.0, 1, 0.3);
    tgf::Trajectory f(kGrid, p.time(), tgf::Role::control_f);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = tgf::random_solenoidal(kGrid, 2, 20 + n, 0.2);
    p.target = tgf::solve_samples(p, f).v.front().relabeled(tgf::Role::target_vd);
    const tgf::GradientResult g = tgf::gradient_estimate(p, f);
    tgf::Trajectory expect = f;
    expect *= 0.3;
    CHECK(tgf::time_norm_sq(difference(g.grad, expect), 0.0) < 1e-24 * tgf::time_norm_sq(expect, 0.0));
  }

  TEST_CASE("sample average does not depend on the worker count") {
    const tgf::ControlProblem p = problem(0.2, 6);
    const tgf::Trajectory f(kGrid, p.time(), tgf::Role::control_f);
    setenv("TGF_THREADS", "1", 1);
    CHECK(tgf::worker_count() == 1);
    const tgf::GradientResult a = tgf::gradient_estimate(p, f);
    setenv("TGF_THREADS", "3", 1);
    CHECK(tgf::worker_count() == 3);
    const tgf::GradientResult b = tgf::gradient_estimate(p, f);
    unsetenv("TGF_THREADS");
    CHECK(a.cost.J == b.cost.J);
    CHECK(a.grad == b.grad);
    CHECK(a.cost.per_sample.size() == 6);
  }

  TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<int> hits(50, 0);
    tgf::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(tgf::parallel_for(4, [](std::size_t i) {
                      if (i == 2) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }

  TEST_CASE("Monte-Carlo optimizer decreases the common-random-number cost") {
    const tgf::ControlProblem p = problem(0.1, 8);
    tgf::OptimizerOptions o;
    o.max_iters = 4;
    const tgf::OptimizerState st = tgf::optimize(p, tgf::Trajectory(kGrid, p.time(), tgf::Role::control_f), o);
    REQUIRE(st.history.size() == 5);
    for (std::size_t i = 1; i < st.history.size(); ++i) {
      CHECK(st.history[i].J <= st.history[i - 1].J);
      CHECK(st.history[i].step > 0.0);
    }
    CHECK(st.history.back().residual < st.history.front().residual);
    CHECK(tgf::control_norm(st.f) <= p.radius * (1 + 1e-12));
  }

  TEST_CASE("invalid problems are rejected") {
    tgf::ControlProblem p = problem(0.0, 1);
    p.lambda = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
}
