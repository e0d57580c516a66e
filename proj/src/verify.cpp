#include "tgf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kinematics.hpp"
#include "tgf/operators.hpp"
#include "tgf/random_fields.hpp"
#include "tgf/sensitivity.hpp"
#include "tgf/state_solver.hpp"
#include "tgf/transform.hpp"

namespace tgf {

namespace {

CheckResult upper(const std::string& name, double measured, double tol, std::string note = {}) {
  return {name, measured, tol, measured <= tol, std::move(note)};
}

double rel(double diff, double scale) { return scale > 0.0 ? std::abs(diff) / scale : std::abs(diff); }

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << x;
  return ss.str();
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.pass; });
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double trilinear_abs(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  const PhysicalField pu = fft_inverse(u);
  const PhysicalField pg = fft_inverse(spectral_gradient(v));
  const PhysicalField pw = fft_inverse(w);
  const std::size_t n = pu.points();
  double acc = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        acc += std::abs(pu.data()[i * n + q] * pg.data()[(2 * j + i) * n + q] * pw.data()[j * n + q]);
      }
    }
  }
  return acc * u.grid().cell_area();
}

std::vector<CheckResult> check_invariants(const RunConfig& cfg, int count) {
  const TorusGrid& g = cfg.grid;
  const int band = g.modes() / 2 - 1;
  double b_vv = 0.0, b_skew = 0.0, b_av = 0.0, k_id = 0.0, j_id = 0.0, tr = 0.0, leray = 0.0, sq_id = 0.0;
  for (int i = 0; i < count; ++i) {
    const SpectralField u = random_solenoidal(g, band, 3 * i + 101);
    const SpectralField v = random_solenoidal(g, band, 3 * i + 102);
    const SpectralField w = random_solenoidal(g, band, 3 * i + 103);
    b_vv = std::max(b_vv, rel(trilinear_b(u, v, v), trilinear_abs(u, v, v)));
    b_skew = std::max(b_skew, rel(trilinear_b(u, v, w) + trilinear_b(u, w, v),
                                  trilinear_abs(u, v, w) + trilinear_abs(u, w, v)));
    const SpectralField Av = stokes_apply(v, 1.0);
    b_av = std::max(b_av, rel(trilinear_b(v, v, Av), trilinear_abs(v, v, Av)));
    const double a4 = rivlin_l4_pow4(v);
    k_id = std::max(k_id, rel(inner(op_K(v), v) - 0.5 * a4, 0.5 * a4));
    // scale for <J(v), v>: int |A(v)|^3
    const PhysicalTensor A = rivlin_A(v);
    const std::size_t n = A.points();
    double a3 = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const detail::Sym2 a{A.data()[q], A.data()[n + q], A.data()[2 * n + q]};
      const double f2 = detail::frob(a, a);
      a3 += std::pow(f2, 1.5);
      const detail::Sym2 s = detail::square(a);
      sq_id = std::max(sq_id, f2 > 0.0 ? std::max({std::abs(s.a11 - 0.5 * f2), std::abs(s.a12),
                                                    std::abs(s.a22 - 0.5 * f2)}) / f2
                                       : 0.0);
    }
    j_id = std::max(j_id, rel(inner(op_J(v), v), a3 * g.cell_area()));
    tr = std::max(tr, check_transport_identity(v, cfg.fluid));
    const SpectralField raw = u + transport_B(v, v) + 0.3 * w;
    SpectralField grad_part(g, 2);
    for (int idx = 0; idx < g.slot_count(); ++idx) {
      if (!g.active_index(idx)) continue;
      const double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
      grad_part.at(0, idx) = cplx(0.0, k1) * u.at(0, idx);
      grad_part.at(1, idx) = cplx(0.0, k2) * u.at(0, idx);
    }
    const SpectralField mixed = raw + grad_part;
    const double lhs = inner(leray_project(mixed), w + grad_part);
    const double rhs = inner(mixed, leray_project(w + grad_part));
    leray = std::max(leray, rel(lhs - rhs, std::sqrt(inner(mixed, mixed) * inner(w + grad_part, w + grad_part))));
  }
  const std::string n = " (" + std::to_string(count) + " fields, N=" + std::to_string(g.modes()) + ")";
  return {
      upper("b(u,v,v) = 0" + n, b_vv, 1e-10),
      upper("b(u,v,w) + b(u,w,v) = 0" + n, b_skew, 1e-10),
      upper("b(v,v,Av) = 0" + n, b_av, 1e-10),
      upper("<K(v),v> = |A(v)|_4^4 / 2" + n, k_id, 1e-8),
      upper("<J(v),v> = 0" + n, j_id, 1e-8),
      upper("transport identity" + n, tr, 1e-8),
      upper("Leray self-adjoint" + n, leray, 1e-12),
      upper("A^2 = |A|^2 I / 2 pointwise" + n, sq_id, 1e-12),
  };
}

std::vector<CheckResult> check_identity(const RunConfig& cfg, int count) {
  const TorusGrid& g = cfg.grid;
  SpectralField shear(g, 2);
  shear.mode(0, 0, 1) = cplx(0.0, -0.5);
  shear.mode(0, 0, -1) = cplx(0.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    worst = std::max(worst, check_transport_identity(random_solenoidal(g, g.modes() / 2 - 1, 900 + i), cfg.fluid));
  }
  return {upper("transport identity, shear mode", check_transport_identity(shear, cfg.fluid), 1e-10),
          upper("transport identity, " + std::to_string(count) + " random fields", worst, 1e-8)};
}

Trajectory smooth_direction(const TorusGrid& grid, const TimeGrid& time, std::uint64_t seed) {
  const SpectralField w1 = random_solenoidal(grid, 2, seed, 1.0, 1.0);
  const SpectralField w2 = random_solenoidal(grid, 3, seed + 1000, 1.0, 1.0);
  Trajectory out(grid, time, Role::control_f);
  for (int n = 0; n <= time.steps(); ++n) {
    const double s = time.t(n) / time.T();
    out[n] = std::cos(std::numbers::pi * s) * w1 + (s * (1.0 - s) + 0.25) * w2;
  }
  return out;
}

namespace {

Trajectory resample_control(const RunConfig& cfg, const TimeGrid& tg) {
  RunConfig c = cfg;
  c.time = tg;
  if (cfg.synthetic_amplitude != 0.0) return synthetic_control(c);
  return Trajectory(cfg.grid, tg, Role::control_f);
}

}  // namespace

std::vector<CheckResult> check_duality(const RunConfig& cfg) {
  const int finest = cfg.time.steps();
  if (finest % 4 != 0) {
    return {{"duality refinement", 0.0, 0.0, false, "time.steps must be divisible by 4"}};
  }
  const Trajectory z_fine = noise_trajectory(cfg.noise, cfg.fluid.alpha1, cfg.grid, cfg.time, 0);
  const SpectralField v0 = initial_state(cfg);
  std::vector<double> steps, res;
  std::vector<CheckResult> out;
  for (int stride : {4, 2, 1}) {
    const Trajectory z = z_fine.subsample(stride);
    const TimeGrid& tg = z.time();
    const Trajectory f = resample_control(cfg, tg);
    const StateSolution st = solve_state(v0, f, z, cfg.fluid, cfg.noise.theta, false);
    const FrozenState fs(reconstruct_v(st.u, z), cfg.fluid);
    const Trajectory psi = smooth_direction(cfg.grid, tg, 31);
    const Trajectory gg = smooth_direction(cfg.grid, tg, 57);
    const DualityResult d = duality_residual(fs, psi, gg);
    steps.push_back(tg.steps());
    res.push_back(d.rel_residual);
    out.push_back({"duality steps=" + std::to_string(tg.steps()), d.rel_residual, 1e-3,
                   stride != 1 || d.rel_residual <= 1e-3,
                   "lhs=" + fmt(d.lhs) + " rhs=" + fmt(d.rhs)});
  }
  std::vector<double> dts;
  for (double s : steps) dts.push_back(cfg.time.T() / s);
  const double slope = loglog_slope(dts, res);
  out.push_back({"duality refinement slope", slope, 1.0, slope >= 1.0, "log-log slope in dt, must be >= 1"});
  return out;
}

ControlProblem deterministic_problem(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.noise.sigma = 0.0;
  ControlProblem p = build_problem(c);
  p.samples = 1;
  return p;
}

double stability_gap(const ControlProblem& problem, const Trajectory& f, const Trajectory& psi, double delta) {
  Trajectory f2 = f;
  f2.axpy(delta, psi);
  const StateSamples a = solve_samples(problem, f);
  const StateSamples b = solve_samples(problem, f2);
  double sup = 0.0;
  for (std::size_t n = 0; n < a.v[0].size(); ++n) {
    const SpectralField d = b.v[0][n] - a.v[0][n];
    const PhysicalTensor A = rivlin_A(d);
    const std::size_t m = A.points();
    double acc = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      acc += A.data()[q] * A.data()[q] + 2.0 * A.data()[m + q] * A.data()[m + q] +
             A.data()[2 * m + q] * A.data()[2 * m + q];
    }
    sup = std::max(sup, std::sqrt(acc * d.grid().cell_area()));
  }
  return sup;
}

std::vector<CheckResult> check_gradient(const RunConfig& cfg) {
  const ControlProblem prob = deterministic_problem(cfg);
  const TimeGrid& tg = prob.time();
  Trajectory f = resample_control(cfg, tg);
  if (cfg.synthetic_amplitude == 0.0) {
    f = smooth_direction(cfg.grid, tg, 5);
    f *= 0.5;
  }
  const Trajectory psi = smooth_direction(cfg.grid, tg, 77);
  const GradientResult gr = gradient_estimate(prob, f);
  const double dir = time_inner(gr.grad, psi);
  const double J0 = gr.cost.J;
  auto J_at = [&](double rho) {
    Trajectory fr = f;
    fr.axpy(rho, psi);
    return cost_J(fr, solve_samples(prob, fr).v, prob.target, prob.lambda).J;
  };
  std::vector<double> rhos{1e-1, 1e-2, 1e-3}, gaps;
  std::vector<CheckResult> out;
  for (double rho : rhos) {
    const double fd = (J_at(rho) - J0) / rho;
    gaps.push_back(rel(fd - dir, std::abs(dir)));
    out.push_back({"gradient gap rho=" + fmt(rho), gaps.back(), 0.0, true, "fd=" + fmt(fd) + " adj=" + fmt(dir)});
  }
  const double fd4 = (J_at(1e-4) - J0) / 1e-4;
  out.push_back(upper("gradient gap rho=1e-4", rel(fd4 - dir, std::abs(dir)), 1e-2,
                      "fd=" + fmt(fd4) + " adj=" + fmt(dir)));
  const double slope = loglog_slope(rhos, gaps);
  out.push_back({"gradient gap slope in rho", slope, 1.0, slope >= 0.8 && slope <= 1.2, "must lie in [0.8, 1.2]"});
  for (double delta : {1e-2, 1e-3}) {
    const double r = stability_gap(prob, f, psi, delta) / stability_gap(prob, f, psi, 0.5 * delta);
    out.push_back({"stability ratio delta=" + fmt(delta), r, 2.0, r >= 1.8 && r <= 2.2, "must lie in [1.8, 2.2]"});
  }
  return out;
}

std::vector<CheckResult> check_ou_stats(const RunConfig& cfg, int steps) {
  NoiseSpec spec = cfg.noise;
  std::string note;
  if (spec.sigma == 0.0) {
    spec.sigma = 1.0;
    note = "sigma = 0 in config, statistics use sigma = 1";
  }
  const TorusGrid& g = cfg.grid;
  const int lim = g.modes() / 2 - 1;
  std::vector<std::pair<int, int>> modes;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {2, -1}, {1, 2}, {-1, 1}, {1, -1}}) {
    if (std::abs(a) <= lim && std::abs(b) <= lim && modes.size() < 5) modes.emplace_back(a, b);
  }
  std::vector<CheckResult> out;

  // Deterministic decay of a unit mode with the noise switched off.
  {
    NoiseSpec quiet = spec;
    quiet.sigma = 0.0;
    const auto [k1, k2] = modes.front();
    SpectralField Y(g, 2);
    double e1 = 0.0, e2 = 0.0;
    noise_direction(k1, k2, e1, e2);
    Y.mode(0, k1, k2) = e1;
    Y.mode(1, k1, k2) = e2;
    Y.mode(0, -k1, -k2) = e1;
    Y.mode(1, -k1, -k2) = e2;
    const double dt = cfg.time.dt();
    const SpectralField Y1 = ou_step(Y, quiet, dt, sample_stream(quiet, 0), 0);
    const double expect = std::exp(-quiet.damping(g, k1, k2) * dt);
    const double got = std::abs(Y1.mode(0, k1, k2) * e1 + Y1.mode(1, k1, k2) * e2);
    out.push_back(upper("OU decay factor exp(-mu dt)", rel(got - expect, expect), 1e-12));
  }

  double mu_min = 1e300;
  for (auto [a, b] : modes) mu_min = std::min(mu_min, spec.damping(g, a, b));
  const double dt = 1.0 / mu_min;
  const int burn = 50;
  const int batches = 100;
  const int per_batch = steps / batches;
  const NoisePath path = sample_stream(spec, 0);
  SpectralField Y(g, 2);
  std::vector<std::vector<double>> batch_sum(modes.size(), std::vector<double>(batches, 0.0));
  for (int n = 0; n < burn + batches * per_batch; ++n) {
    Y = ou_step(Y, spec, dt, path, n);
    if (n < burn) continue;
    const int b = (n - burn) / per_batch;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const auto [k1, k2] = modes[m];
      batch_sum[m][b] += std::norm(Y.mode(0, k1, k2)) + std::norm(Y.mode(1, k1, k2));
    }
  }
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto [k1, k2] = modes[m];
    double mean = 0.0;
    for (double s : batch_sum[m]) mean += s / per_batch;
    mean /= batches;
    double var = 0.0;
    for (double s : batch_sum[m]) var += (s / per_batch - mean) * (s / per_batch - mean);
    const double se = std::sqrt(var / (batches - 1) / batches);
    const double expect = spec.variance(g, k1, k2) / (2.0 * spec.damping(g, k1, k2));
    const double z = std::abs(mean - expect) / se;
    out.push_back(upper("OU variance k=(" + std::to_string(k1) + "," + std::to_string(k2) + ") in standard errors",
                        z, 3.0,
                        "empirical=" + fmt(mean) + " exact=" + fmt(expect) + (note.empty() ? "" : "; " + note)));
  }
  return out;
}

}  // namespace tgf
