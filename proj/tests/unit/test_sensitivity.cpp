#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tgf/noise.hpp"
#include "tgf/operators.hpp"
#include "tgf/random_fields.hpp"
#include "tgf/sensitivity.hpp"
#include "tgf/state_solver.hpp"

namespace {

const tgf::TorusGrid kGrid(2.0 * std::numbers::pi, 8);
const tgf::FluidParams kFluid(0.1, 0.2, 0.1872983346207417, 0.1);

}  // namespace

TEST_SUITE("sensitivity_solvers") {
  TEST_CASE("adjoint operator is the L2 adjoint of the linearized operator") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const tgf::SpectralField v = tgf::random_solenoidal(kGrid, 3, 100 + seed, 0.7);
      const tgf::SpectralField m = tgf::random_solenoidal(kGrid, 3, 200 + seed);
      const tgf::SpectralField q = tgf::random_solenoidal(kGrid, 3, 300 + seed);
      const double lhs = tgf::inner(tgf::linearized_operator(m, v, kFluid), q);
      const double rhs = tgf::inner(m, tgf::adjoint_operator(q, v, kFluid));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }

  TEST_CASE("linearized operator is the derivative of -G") {
    const tgf::SpectralField v = tgf::random_solenoidal(kGrid, 3, 7, 0.7);
    const tgf::SpectralField m = tgf::random_solenoidal(kGrid, 3, 8);
    const tgf::SpectralField zero(kGrid);
    const double eps = 1e-4;
    tgf::SpectralField fd = tgf::state_rhs_G(v - eps * m, zero, kFluid) - tgf::state_rhs_G(v + eps * m, zero, kFluid);
    fd *= 1.0 / (2 * eps);
    const tgf::SpectralField lin = tgf::linearized_operator(m, v, kFluid);
    CHECK(tgf::hs_seminorm(fd - lin, 0.0) < 1e-6 * tgf::hs_seminorm(lin, 0.0));
  }

  TEST_CASE("pathwise duality on a stochastic state converges in time") {
    tgf::NoiseSpec s;
    s.sigma = 0.05;
    s.master_seed = 1;
    auto residual = [&](int steps) {
      const tgf::TimeGrid tg(0.4, steps);
      const tgf::Trajectory z = tgf::noise_trajectory(s, kFluid.alpha1, kGrid, tgf::TimeGrid(0.4, 400), 0)
                                    .subsample(400 / steps);
      const tgf::Trajectory f(kGrid, tg, tgf::Role::control_f);
      const tgf::StateSolution st =
          tgf::solve_state(tgf::random_solenoidal(kGrid, 3, 3, 0.5), f, z, kFluid, s.theta, false);
      const tgf::FrozenState fs(tgf::reconstruct_v(st.u, z), kFluid);
      tgf::Trajectory psi(kGrid, tg, tgf::Role::control_f), g(kGrid, tg, tgf::Role::target_vd);
      const tgf::SpectralField w1 = tgf::random_solenoidal(kGrid, 2, 51), w2 = tgf::random_solenoidal(kGrid, 2, 52);
      for (int n = 0; n <= steps; ++n) {
        const double t = tg.t(n) / tg.T();
        psi[n] = std::cos(std::numbers::pi * t) * w1;
        g[n] = (t * (1 - t) + 0.25) * w2;
      }
      return tgf::duality_residual(fs, psi, g).rel_residual;
    };
    const double r1 = residual(100), r2 = residual(200);
    CHECK(r2 < 1e-4);
    CHECK(r1 / r2 > 2.0);
  }

  TEST_CASE("shear-mode sensitivities match the dense ODE oracle") {
    const tgf::TorusGrid g(2.0 * std::numbers::pi, 4);
    const int steps = 400;
    const tgf::TimeGrid tg(1.0, steps);
    const oracle::Forcing f = [](double t) { return oracle::Vec2{0.5 * std::cos(t), 0.2}; };
    const oracle::Forcing psi = [](double t) { return oracle::Vec2{std::sin(2 * t), 1.0}; };
    const oracle::Forcing gg = [](double t) { return oracle::Vec2{1.0 - t, std::cos(t)}; };
    auto sample = [&](const oracle::Forcing& fn, tgf::Role role) {
      tgf::Trajectory tr(g, tg, role);
      for (int n = 0; n <= steps; ++n) {
        const auto c = fn(tg.t(n));
        tr[n] = oracle::shear_field(g, c[0], c[1]);
      }
      return tr;
    };
    const tgf::Trajectory z(g, tg, tgf::Role::noise_z);
    const tgf::StateSolution st =
        tgf::solve_state(oracle::shear_field(g, 1.0, 0.5), sample(f, tgf::Role::control_f), z, kFluid, 1.0, false);
    const tgf::FrozenState fs(tgf::reconstruct_v(st.u, z), kFluid);
    const tgf::Trajectory m = tgf::solve_linearized(fs, sample(psi, tgf::Role::control_f));
    const tgf::Trajectory p = tgf::solve_adjoint(fs, sample(gg, tgf::Role::target_vd));
    const oracle::ShearSolution ref = oracle::shear_solve({kFluid.nu, kFluid.alpha1, kFluid.beta}, {1.0, 0.5}, f,
                                                          psi, gg, 1.0, 4 * steps);
    const auto mT = oracle::shear_coefficients(m[steps]);
    const auto p0 = oracle::shear_coefficients(p[0]);
    CHECK(std::hypot(mT[0] - ref.m.back()[0], mT[1] - ref.m.back()[1]) < 1e-9);
    CHECK(std::hypot(p0[0] - ref.p.front()[0], p0[1] - ref.p.front()[1]) < 1e-9);
    CHECK(p[steps].max_abs() == 0.0);
    CHECK(m[0].max_abs() == 0.0);
    const tgf::DualityResult d =
        tgf::duality_residual(sample(psi, tgf::Role::control_f), p, sample(gg, tgf::Role::target_vd), m);
    CHECK(d.rel_residual < 1e-5);
  }
}
