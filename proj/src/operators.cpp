#include "tgf/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "kinematics.hpp"
#include "tgf/transform.hpp"

namespace tgf {

using detail::Kinematics;
using detail::Sym2;

namespace {

void require_velocity(const SpectralField& s, const char* where) {
  if (s.components() != 2) throw std::invalid_argument(std::string(where) + ": velocity field expected");
}

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* where) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

template <class F>
SpectralField per_mode_scale(const SpectralField& s, F factor) {
  SpectralField out = s;
  const TorusGrid& g = s.grid();
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    const double f = g.active_index(idx) ? factor(g.kappa_sq_index(idx)) : 0.0;
    for (int c = 0; c < s.components(); ++c) out.at(c, idx) *= f;
  }
  return out;
}

}  // namespace

SpectralField leray_project(const SpectralField& s) {
  require_velocity(s, "leray_project");
  const TorusGrid& g = s.grid();
  SpectralField out(g, 2);
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    if (!g.active_index(idx)) continue;
    const double k1 = g.k1_of(idx);
    const double k2 = g.k2_of(idx);
    const double kk = k1 * k1 + k2 * k2;
    const cplx a = s.at(0, idx);
    const cplx b = s.at(1, idx);
    const cplx dot = (k1 * a + k2 * b) / kk;
    out.at(0, idx) = a - k1 * dot;
    out.at(1, idx) = b - k2 * dot;
  }
  return out;
}

SpectralField stokes_apply(const SpectralField& s, double power) {
  if (power == 0.0) return per_mode_scale(s, [](double) { return 1.0; });
  if (power == 1.0) return per_mode_scale(s, [](double k2) { return k2; });
  if (power == 2.0) return per_mode_scale(s, [](double k2) { return k2 * k2; });
  return per_mode_scale(s, [power](double k2) { return std::pow(k2, power); });
}

SpectralField upsilon_apply(const SpectralField& s, double a1) {
  return per_mode_scale(s, [a1](double k2) { return 1.0 + a1 * k2; });
}

SpectralField upsilon_solve(const SpectralField& s, double a1) {
  if (!(a1 >= 0.0)) throw std::invalid_argument("upsilon_solve: alpha1 must be non-negative");
  return per_mode_scale(s, [a1](double k2) { return 1.0 / (1.0 + a1 * k2); });
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  require_velocity(u, "trilinear_b");
  require_same_grid(u, v, "trilinear_b");
  require_same_grid(u, w, "trilinear_b");
  const PhysicalField pu = fft_inverse(u);
  const PhysicalField pg = fft_inverse(spectral_gradient(v));
  const PhysicalField pw = fft_inverse(w);
  const std::size_t n = pu.points();
  double acc = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    for (int j = 0; j < 2; ++j) {
      double adv = 0.0;
      for (int i = 0; i < 2; ++i) adv += pu.data()[i * n + q] * pg.data()[(2 * j + i) * n + q];
      acc += adv * pw.data()[j * n + q];
    }
  }
  return acc * u.grid().cell_area();
}

SpectralField transport_B(const SpectralField& u, const SpectralField& v) {
  require_velocity(u, "transport_B");
  require_same_grid(u, v, "transport_B");
  const PhysicalField pu = fft_inverse(u);
  const PhysicalField pg = fft_inverse(spectral_gradient(v));
  PhysicalField adv(u.grid(), 2);
  const std::size_t n = pu.points();
  for (std::size_t q = 0; q < n; ++q) {
    for (int j = 0; j < 2; ++j) {
      adv.data()[j * n + q] = pu.data()[q] * pg.data()[(2 * j) * n + q] + pu.data()[n + q] * pg.data()[(2 * j + 1) * n + q];
    }
  }
  return leray_project(fft_forward(adv));
}

PhysicalTensor rivlin_A(const SpectralField& v) {
  require_velocity(v, "rivlin_A");
  return fft_inverse(spectral_rivlin(v));
}

namespace {

// -P div(S) for a pointwise stress built from A(v).
template <class Stress>
SpectralField projected_neg_div(const SpectralField& v, Stress stress) {
  const Kinematics kin(v, 0.0, false);
  PhysicalField S(v.grid(), 3);
  for (std::size_t q = 0; q < kin.points(); ++q) detail::store(S, q, stress(kin.rivlin(q)));
  SpectralField d = spectral_divergence_sym(fft_forward(S));
  d *= -1.0;
  return leray_project(d);
}

}  // namespace

SpectralField op_J(const SpectralField& v) {
  require_velocity(v, "op_J");
  return projected_neg_div(v, [](const Sym2& a) { return detail::square(a); });
}

SpectralField op_K(const SpectralField& v) {
  require_velocity(v, "op_K");
  return projected_neg_div(v, [](const Sym2& a) {
    const double s = detail::frob(a, a);
    return Sym2{s * a.a11, s * a.a12, s * a.a22};
  });
}

SpectralField state_rhs_G_explicit(const SpectralField& u, const SpectralField& z, const FluidParams& p) {
  require_velocity(u, "state_rhs_G");
  require_same_grid(u, z, "state_rhs_G");
  const SpectralField v = u + z;
  const Kinematics kin(v, p.alpha1, true);
  const std::size_t n = kin.points();
  PhysicalField transport(v.grid(), 2);
  PhysicalField stress(v.grid(), 3);
  const double c2 = p.alpha1 + p.alpha2;
  for (std::size_t q = 0; q < n; ++q) {
    for (int i = 0; i < 2; ++i) {
      // ((v.grad) Y(v))_i + sum_j Y(v)_j d_i v_j
      double t = 0.0;
      for (int j = 0; j < 2; ++j) t += kin.vel(j, q) * kin.dyw(i, j, q) + kin.yvel(j, q) * kin.dw(j, i, q);
      transport.data()[i * n + q] = t;
    }
    const Sym2 a = kin.rivlin(q);
    const Sym2 a2 = detail::square(a);
    const double s = detail::frob(a, a);
    detail::store(stress, q, {c2 * a2.a11 + p.beta * s * a.a11, c2 * a2.a12 + p.beta * s * a.a12,
                              c2 * a2.a22 + p.beta * s * a.a22});
  }
  SpectralField rhs = fft_forward(transport);
  rhs -= spectral_divergence_sym(fft_forward(stress));
  return leray_project(rhs);
}

SpectralField state_rhs_G(const SpectralField& u, const SpectralField& z, const FluidParams& p) {
  SpectralField g = state_rhs_G_explicit(u, z, p);
  g.axpy(p.nu, stokes_apply(u, 1.0));
  return g;
}

double check_transport_identity(const SpectralField& w, const FluidParams& p) {
  require_velocity(w, "check_transport_identity");
  const TorusGrid& grid = w.grid();
  const Kinematics kin(w, p.alpha1, true);
  const PhysicalField gradA = fft_inverse(spectral_gradient(spectral_rivlin(w)));  // comp 2*c + k: d_k A_c
  const std::size_t n = kin.points();
  PhysicalField lhs_vec(grid, 2), lhs_ten(grid, 3), rhs_vec(grid, 2), rhs_ten(grid, 3);
  for (std::size_t q = 0; q < n; ++q) {
    for (int i = 0; i < 2; ++i) {
      double adv = 0.0;
      double m = 0.0;
      for (int j = 0; j < 2; ++j) {
        adv += kin.vel(j, q) * kin.dw(i, j, q);
        m += kin.vel(j, q) * kin.dyw(i, j, q) + kin.yvel(j, q) * kin.dw(j, i, q);
      }
      lhs_vec.data()[i * n + q] = adv;
      rhs_vec.data()[i * n + q] = m;
    }
    const Sym2 a = kin.rivlin(q);
    // (w.grad) A
    double wa[3];
    for (int c = 0; c < 3; ++c) {
      wa[c] = kin.vel(0, q) * gradA.data()[(2 * c) * n + q] + kin.vel(1, q) * gradA.data()[(2 * c + 1) * n + q];
    }
    // L^T A + A L with L_ij = d_j w_i
    const double L[2][2] = {{kin.dw(0, 0, q), kin.dw(0, 1, q)}, {kin.dw(1, 0, q), kin.dw(1, 1, q)}};
    const double Am[2][2] = {{a.a11, a.a12}, {a.a12, a.a22}};
    double la[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int k = 0; k < 2; ++k) s += L[k][i] * Am[k][j] + Am[i][k] * L[k][j];
        la[i][j] = s;
      }
    }
    const Sym2 nn{wa[0] + la[0][0], wa[1] + la[0][1], wa[2] + la[1][1]};
    const Sym2 a2 = detail::square(a);
    detail::store(lhs_ten, q, {-p.alpha1 * nn.a11 - p.alpha2 * a2.a11, -p.alpha1 * nn.a12 - p.alpha2 * a2.a12,
                               -p.alpha1 * nn.a22 - p.alpha2 * a2.a22});
    const double c2 = p.alpha1 + p.alpha2;
    detail::store(rhs_ten, q, {-c2 * a2.a11, -c2 * a2.a12, -c2 * a2.a22});
  }
  SpectralField lhs = fft_forward(lhs_vec);
  lhs += spectral_divergence_sym(fft_forward(lhs_ten));
  SpectralField rhs = fft_forward(rhs_vec);
  rhs += spectral_divergence_sym(fft_forward(rhs_ten));
  lhs = leray_project(lhs);
  rhs = leray_project(rhs);
  const double nl = std::sqrt(inner(lhs, lhs));
  const double nr = std::sqrt(inner(rhs, rhs));
  const double scale = std::max(nl, nr);
  if (scale == 0.0) return 0.0;
  const SpectralField diff = lhs - rhs;
  return std::sqrt(inner(diff, diff)) / scale;
}

double hs_seminorm(const SpectralField& v, double s) {
  const TorusGrid& g = v.grid();
  double acc = 0.0;
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    if (!g.active_index(idx)) continue;
    const double w = std::pow(g.kappa_sq_index(idx), s);
    for (int c = 0; c < v.components(); ++c) acc += w * std::norm(v.at(c, idx));
  }
  return g.length() * std::sqrt(acc);
}

double rivlin_l4_pow4(const SpectralField& v) {
  const PhysicalTensor a = rivlin_A(v);
  const std::size_t n = a.points();
  double acc = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double s = a.data()[q] * a.data()[q] + 2.0 * a.data()[n + q] * a.data()[n + q] +
                     a.data()[2 * n + q] * a.data()[2 * n + q];
    acc += s * s;
  }
  return acc * v.grid().cell_area();
}

FieldNorms norms(const SpectralField& v) {
  FieldNorms out;
  out.l2 = hs_seminorm(v, 0.0);
  out.grad_l2 = hs_seminorm(v, 1.0);
  out.stokes_l2 = hs_seminorm(v, 2.0);
  out.h3 = hs_seminorm(v, 3.0);
  out.a_l4 = std::pow(rivlin_l4_pow4(v), 0.25);
  return out;
}

}  // namespace tgf
