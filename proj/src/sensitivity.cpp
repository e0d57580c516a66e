#include "tgf/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "integrator.hpp"
#include "kinematics.hpp"
#include "tgf/operators.hpp"

namespace tgf {

using detail::Kinematics;
using detail::Sym2;

namespace {

// Linearized stress S(w) = (a1 + a2)(A_v A_w + A_w A_v) + beta |A_v|^2 A_w + 2 beta (A_w : A_v) A_v,
// returned as fft(S) so that callers add its divergence.
SpectralField linear_stress(const Kinematics& kv, const Kinematics& kw, const FluidParams& p) {
  PhysicalField S(kv.w.grid(), 3);
  const double c2 = p.alpha1 + p.alpha2;
  for (std::size_t q = 0; q < kv.points(); ++q) {
    const Sym2 av = kv.rivlin(q);
    const Sym2 aw = kw.rivlin(q);
    const Sym2 ac = detail::anticomm(av, aw);
    const double vv = detail::frob(av, av);
    const double wv = 2.0 * detail::frob(aw, av);
    detail::store(S, q,
                  {c2 * ac.a11 + p.beta * (vv * aw.a11 + wv * av.a11),
                   c2 * ac.a12 + p.beta * (vv * aw.a12 + wv * av.a12),
                   c2 * ac.a22 + p.beta * (vv * aw.a22 + wv * av.a22)});
  }
  return fft_forward(S);
}

}  // namespace

SpectralField linearized_operator(const SpectralField& m, const SpectralField& v, const FluidParams& p) {
  const Kinematics kv(v, p.alpha1, true);
  const Kinematics km(m, p.alpha1, true);
  const std::size_t n = kv.points();
  PhysicalField tr(v.grid(), 2);
  for (std::size_t q = 0; q < n; ++q) {
    for (int i = 0; i < 2; ++i) {
      double t = 0.0;
      for (int j = 0; j < 2; ++j) {
        t += kv.vel(j, q) * km.dyw(i, j, q) + km.vel(j, q) * kv.dyw(i, j, q);
        t += km.yvel(j, q) * kv.dw(j, i, q) + kv.yvel(j, q) * km.dw(j, i, q);
      }
      tr.data()[i * n + q] = -t;
    }
  }
  SpectralField out = fft_forward(tr);
  out += spectral_divergence_sym(linear_stress(kv, km, p));
  out = leray_project(out);
  out.axpy(-p.nu, stokes_apply(m, 1.0));
  return out;
}

SpectralField adjoint_operator(const SpectralField& q_field, const SpectralField& v, const FluidParams& p) {
  const Kinematics kv(v, p.alpha1, true);
  const Kinematics kq(q_field, p.alpha1, false);
  const std::size_t n = kv.points();
  PhysicalField commutator(v.grid(), 2);  // (v.grad) q - (q.grad) v, gets Upsilon afterwards
  PhysicalField rest(v.grid(), 2);        // -sum_j q_j grad Y(v)_j + (q.grad) Y(v)
  for (std::size_t q = 0; q < n; ++q) {
    for (int i = 0; i < 2; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < 2; ++j) {
        c += kv.vel(j, q) * kq.dw(i, j, q) - kq.vel(j, q) * kv.dw(i, j, q);
        r += -kq.vel(j, q) * kv.dyw(j, i, q) + kq.vel(j, q) * kv.dyw(i, j, q);
      }
      commutator.data()[i * n + q] = c;
      rest.data()[i * n + q] = r;
    }
  }
  SpectralField out = upsilon_apply(fft_forward(commutator), p.alpha1);
  out += fft_forward(rest);
  out += spectral_divergence_sym(linear_stress(kv, kq, p));
  out = leray_project(out);
  out.axpy(-p.nu, stokes_apply(q_field, 1.0));
  return out;
}

SpectralField linearized_rhs(const SpectralField& m, const SpectralField& v, const SpectralField& psi,
                             const FluidParams& p) {
  SpectralField r = linearized_operator(m, v, p);
  r += leray_project(psi);
  return r;
}

SpectralField adjoint_rhs(const SpectralField& p_field, const SpectralField& v, const SpectralField& g,
                          const FluidParams& params) {
  SpectralField r = adjoint_operator(p_field, v, params);
  r += leray_project(g);
  return r;
}

namespace {

template <class Op>
Trajectory integrate_linear(const Trajectory& v, const Trajectory& forcing, const FluidParams& p, Role role,
                            Op op, const char* where) {
  if (!(v.grid() == forcing.grid()) || !(v.time() == forcing.time())) {
    throw std::invalid_argument(std::string(where) + ": forcing must share the state's grids");
  }
  const auto rates = detail::viscous_rates(v.grid(), p.nu, p.alpha1);
  auto rhs = [&](int n, double frac, const SpectralField& y) {
    SpectralField r = op(y, v.at(n, frac), p);
    r.axpy(p.nu, stokes_apply(y, 1.0));  // viscous part is in the integrating factor
    r += leray_project(forcing.at(n, frac));
    return upsilon_solve(r, p.alpha1);
  };
  return detail::lawson_rk4(SpectralField(v.grid(), 2), v.time(), role, rates, rhs, where);
}

}  // namespace

Trajectory solve_linearized(const FrozenState& fs, const Trajectory& psi) {
  return integrate_linear(fs.v, psi, fs.params, Role::linearized_m, linearized_operator, "solve_linearized");
}

Trajectory solve_adjoint(const FrozenState& fs, const Trajectory& g) {
  const Trajectory q =
      integrate_linear(fs.v.reversed(), g.reversed(), fs.params, Role::adjoint_p, adjoint_operator, "solve_adjoint");
  return q.reversed();
}

DualityResult duality_residual(const Trajectory& psi, const Trajectory& p, const Trajectory& g,
                               const Trajectory& m) {
  DualityResult d;
  d.lhs = time_inner(psi, p);
  d.rhs = time_inner(g, m);
  const double scale = std::max({std::abs(d.lhs), std::abs(d.rhs), 1e-30});
  d.rel_residual = std::abs(d.lhs - d.rhs) / scale;
  return d;
}

DualityResult duality_residual(const FrozenState& fs, const Trajectory& psi, const Trajectory& g) {
  const Trajectory m = solve_linearized(fs, psi);
  const Trajectory p = solve_adjoint(fs, g);
  return duality_residual(psi, p, g, m);
}

}  // namespace tgf
