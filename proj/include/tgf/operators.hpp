#pragma once

#include "tgf/field.hpp"
#include "tgf/grid.hpp"

namespace tgf {

/// Helmholtz-Hodge projection, per mode (I - k k^T / |k|^2).
SpectralField leray_project(const SpectralField& s);

/// Fractional Stokes power: multiplies mode k by kappa(k)^(2 power).
SpectralField stokes_apply(const SpectralField& s, double power);

/// (I + a1 A) and its exact inverse.
SpectralField upsilon_apply(const SpectralField& s, double a1);
SpectralField upsilon_solve(const SpectralField& s, double a1);

/// b(u, v, w) = int (u . grad) v . w, by collocation quadrature.
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// B(u, v) = P[(u . grad) v].
SpectralField transport_B(const SpectralField& u, const SpectralField& v);

/// Samples of A(v) = grad v + grad v^T as components (11, 12, 22).
PhysicalTensor rivlin_A(const SpectralField& v);

/// J(v) = -P div(A(v) A(v)).
SpectralField op_J(const SpectralField& v);

/// K(v) = -P div(|A(v)|^2 A(v)).
SpectralField op_K(const SpectralField& v);

/// G(u, z): viscous, transport, quadratic and cubic stress terms of the
/// random (pathwise) equation, evaluated at v = u + z.
SpectralField state_rhs_G(const SpectralField& u, const SpectralField& z, const FluidParams& p);

/// G(u, z) - nu A u: the part of G handled explicitly by the integrators.
SpectralField state_rhs_G_explicit(const SpectralField& u, const SpectralField& z, const FluidParams& p);

/// Relative L^2 mismatch between the two projected assemblies of M(w):
/// P[(w.grad)w + div(-a1 N(w) - a2 A(w)^2)] against P[M(w)].
double check_transport_identity(const SpectralField& w, const FluidParams& p);

struct FieldNorms {
  double l2 = 0.0;        // ||v||_2
  double grad_l2 = 0.0;   // ||grad v||_2 = ||A^{1/2} v||_2
  double stokes_l2 = 0.0; // ||A v||_2
  double h3 = 0.0;        // ||A^{3/2} v||_2
  double a_l4 = 0.0;      // ||A(v)||_4
};

/// Mode-sum norms (with the L^2 factor of the coefficient normalization) and
/// the quadrature-backed ||A(v)||_4.
FieldNorms norms(const SpectralField& v);

/// ||v||_{H^s} = (L^2 sum kappa^{2s} |v_k|^2)^{1/2}, equal to ||A^{s/2} v||_2.
double hs_seminorm(const SpectralField& v, double s);

/// int |A(v)|^4 dx by collocation quadrature.
double rivlin_l4_pow4(const SpectralField& v);

}  // namespace tgf
