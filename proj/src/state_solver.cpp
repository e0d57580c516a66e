#include "tgf/state_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "integrator.hpp"
#include "kinematics.hpp"
#include "tgf/operators.hpp"

namespace tgf {

namespace {

void require_matching(const Trajectory& a, const Trajectory& b, const char* where) {
  if (!(a.grid() == b.grid()) || !(a.time() == b.time())) {
    throw std::invalid_argument(std::string(where) + ": trajectories must share grid and time grid");
  }
}

double sq(double x) { return x * x; }

}  // namespace

SpectralField noise_coupling(const SpectralField& z, const FluidParams& p, double theta) {
  const TorusGrid& g = z.grid();
  SpectralField out(g, 2);
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    if (!g.active_index(idx)) continue;
    const double k2 = g.kappa_sq_index(idx);
    const double m = 1.0 + (theta + p.alpha1 - p.nu) * k2 + theta * p.alpha1 * k2 * k2;
    out.at(0, idx) = m * z.at(0, idx);
    out.at(1, idx) = m * z.at(1, idx);
  }
  return out;
}

SpectralField state_rhs(const SpectralField& u, const SpectralField& z, const SpectralField& f,
                        const FluidParams& p, double theta) {
  SpectralField r = state_rhs_G(u, z, p);
  r *= -1.0;
  r += leray_project(f);
  r += noise_coupling(z, p, theta);
  return r;
}

StateSolution solve_state(const SpectralField& v0, const Trajectory& f, const Trajectory& z,
                          const FluidParams& p, double theta, bool with_report) {
  require_matching(f, z, "solve_state");
  if (!(v0.grid() == z.grid())) throw std::invalid_argument("solve_state: v0 grid mismatch");
  const TimeGrid& tg = z.time();
  const auto rates = detail::viscous_rates(v0.grid(), p.nu, p.alpha1);
  auto rhs = [&](int n, double frac, const SpectralField& u) {
    const SpectralField zt = z.at(n, frac);
    SpectralField r = state_rhs_G_explicit(u, zt, p);
    r *= -1.0;
    r += leray_project(f.at(n, frac));
    r += noise_coupling(zt, p, theta);
    return upsilon_solve(r, p.alpha1);
  };
  StateSolution out;
  out.u = detail::lawson_rk4(v0, tg, Role::state_u, rates, rhs, "solve_state");
  if (!with_report) return out;

  StateRunReport& rep = out.report;
  const EnergyAudit audit = energy_audit(out.u, z, f, p, theta);
  for (int n = 0; n <= tg.steps(); ++n) {
    const SpectralField& u = out.u[n];
    rep.t.push_back(tg.t(n));
    rep.u_l2sq.push_back(sq(hs_seminorm(u, 0.0)));
    rep.u_grad_l2sq.push_back(sq(hs_seminorm(u, 1.0)));
    rep.Au_l2sq.push_back(sq(hs_seminorm(u, 2.0)));
    rep.A32u_l2sq.push_back(sq(hs_seminorm(u, 3.0)));
    rep.Av_L4_4.push_back(rivlin_l4_pow4(u + z[n]));
  }
  rep.energy_residual = audit.residual;
  return out;
}

Trajectory solve_state_direct(const SpectralField& v0, const Trajectory& f, const NoiseSpec& noise,
                              std::uint64_t sample_index, const FluidParams& p) {
  const TorusGrid& g = v0.grid();
  const TimeGrid& tg = f.time();
  const double dt = tg.dt();
  const NoisePath path = sample_stream(noise, sample_index);
  const SpectralField zero(g, 2);
  std::vector<SpectralField> snaps{v0};
  snaps.reserve(static_cast<std::size_t>(tg.steps()) + 1);
  for (int n = 0; n < tg.steps(); ++n) {
    const SpectralField& v = snaps.back();
    SpectralField num = upsilon_apply(v, p.alpha1);
    SpectralField drive = state_rhs_G_explicit(v, zero, p);
    drive *= -1.0;
    drive += leray_project(f[n]);
    num.axpy(dt, drive);
    if (noise.sigma != 0.0) num += wiener_increment(g, noise, dt, path, n);
    SpectralField next(g, 2);
    for (int idx = 0; idx < g.slot_count(); ++idx) {
      if (!g.active_index(idx)) continue;
      const double k2 = g.kappa_sq_index(idx);
      const double d = 1.0 + p.alpha1 * k2 + dt * p.nu * k2;
      next.at(0, idx) = num.at(0, idx) / d;
      next.at(1, idx) = num.at(1, idx) / d;
    }
    if (!next.all_finite()) throw NonFiniteError("solve_state_direct", n + 1);
    snaps.push_back(std::move(next));
  }
  return Trajectory(tg, Role::state_v, std::move(snaps));
}

EnergyTerms energy_terms(const SpectralField& u, const SpectralField& z, const SpectralField& f,
                         const FluidParams& p, double theta) {
  EnergyTerms e;
  const SpectralField v = u + z;
  const SpectralField Au = stokes_apply(u, 1.0);
  e.I[1] = p.alpha1 * trilinear_b(z, u, Au);
  e.I[2] = trilinear_b(z, u, upsilon_apply(z, p.alpha1));
  e.I[3] = trilinear_b(u, z, u);
  e.I[4] = p.alpha1 * trilinear_b(u, z, stokes_apply(v, 1.0));
  const detail::Kinematics kv(v, 0.0, false);
  const detail::Kinematics ku(u, 0.0, false);
  const detail::Kinematics kz(z, 0.0, false);
  double i5 = 0.0, i6 = 0.0;
  for (std::size_t q = 0; q < kv.points(); ++q) {
    const detail::Sym2 av = kv.rivlin(q);
    i5 += detail::frob(detail::square(av), ku.rivlin(q));
    i6 += detail::frob(av, av) * detail::frob(av, kz.rivlin(q));
  }
  const double w = u.grid().cell_area();
  e.I[5] = 0.5 * (p.alpha1 + p.alpha2) * i5 * w;
  e.I[6] = 0.5 * p.beta * i6 * w;
  e.I[7] = inner(leray_project(f) + noise_coupling(z, p, theta), u);
  return e;
}

namespace {

// int_n^{n+1} of the 4-point interpolant of samples y, in units of dt.
double step_quadrature(const std::vector<double>& y, int n) {
  const int steps = static_cast<int>(y.size()) - 1;
  if (steps < 3) return 0.5 * (y[n] + y[n + 1]);
  if (n == 0) return (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]) / 24.0;
  if (n == steps - 1) return (y[n - 2] - 5.0 * y[n - 1] + 19.0 * y[n] + 9.0 * y[n + 1]) / 24.0;
  return (-y[n - 1] + 13.0 * y[n] + 13.0 * y[n + 1] - y[n + 2]) / 24.0;
}

}  // namespace

EnergyAudit energy_audit(const Trajectory& u, const Trajectory& z, const Trajectory& f, const FluidParams& p,
                         double theta) {
  require_matching(u, z, "energy_audit");
  require_matching(u, f, "energy_audit");
  EnergyAudit a;
  const int steps = u.steps();
  for (int n = 0; n <= steps; ++n) {
    const SpectralField& un = u[n];
    const double l2 = hs_seminorm(un, 0.0);
    const double h1 = hs_seminorm(un, 1.0);
    a.energy.push_back(0.5 * (l2 * l2 + p.alpha1 * h1 * h1));
    const double pw = inner(state_rhs(un, z[n], f[n], p, theta), un);
    a.power.push_back(pw);
    const double diss = p.nu * h1 * h1 + 0.5 * p.beta * rivlin_l4_pow4(un + z[n]);
    a.dissipation.push_back(diss);
    const EnergyTerms t = energy_terms(un, z[n], f[n], p, theta);
    const double split = t.combined();
    a.split_terms_sum.push_back(split);
    double scale = std::abs(pw) + diss;
    for (int i = 1; i <= 7; ++i) scale = std::max(scale, std::abs(t.I[i]));
    a.split_mismatch.push_back(scale > 0.0 ? std::abs(pw + diss - split) / scale : 0.0);
  }
  const double dt = u.time().dt();
  a.residual.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  for (int n = 0; n < steps; ++n) {
    a.residual[n + 1] = std::abs((a.energy[n + 1] - a.energy[n]) / dt - step_quadrature(a.power, n));
  }
  return a;
}

}  // namespace tgf
