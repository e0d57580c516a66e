#pragma once

// Collocation samples shared by the nonlinear operators. Internal header.

#include "tgf/field.hpp"
#include "tgf/operators.hpp"
#include "tgf/transform.hpp"

namespace tgf::detail {

struct Sym2 {
  double a11, a12, a22;
};

inline double frob(const Sym2& x, const Sym2& y) { return x.a11 * y.a11 + 2.0 * x.a12 * y.a12 + x.a22 * y.a22; }
inline Sym2 square(const Sym2& a) {
  return {a.a11 * a.a11 + a.a12 * a.a12, a.a12 * (a.a11 + a.a22), a.a12 * a.a12 + a.a22 * a.a22};
}
/// X Y + Y X
inline Sym2 anticomm(const Sym2& x, const Sym2& y) {
  return {2.0 * (x.a11 * y.a11 + x.a12 * y.a12),
          x.a11 * y.a12 + x.a12 * y.a22 + x.a12 * y.a11 + x.a22 * y.a12,
          2.0 * (x.a12 * y.a12 + x.a22 * y.a22)};
}

/// Samples of a velocity field w, its gradient, Upsilon(w) and its gradient,
/// and A(w). Gradient component 2*i + j holds d_j w_i.
struct Kinematics {
  PhysicalField w;
  PhysicalField grad;
  PhysicalField yw;
  PhysicalField ygrad;
  PhysicalField A;

  Kinematics(const SpectralField& field, double a1, bool with_upsilon) {
    w = fft_inverse(field);
    grad = fft_inverse(spectral_gradient(field));
    A = PhysicalField(field.grid(), 3);
    const std::size_t n = w.points();
    for (std::size_t q = 0; q < n; ++q) {
      A.data()[q] = 2.0 * grad.data()[q];
      A.data()[n + q] = grad.data()[n + q] + grad.data()[2 * n + q];
      A.data()[2 * n + q] = 2.0 * grad.data()[3 * n + q];
    }
    if (with_upsilon) {
      const SpectralField y = upsilon_apply(field, a1);
      yw = fft_inverse(y);
      ygrad = fft_inverse(spectral_gradient(y));
    }
  }

  std::size_t points() const { return w.points(); }
  Sym2 rivlin(std::size_t q) const {
    const std::size_t n = points();
    return {A.data()[q], A.data()[n + q], A.data()[2 * n + q]};
  }
  double vel(int i, std::size_t q) const { return w.data()[i * points() + q]; }
  double yvel(int i, std::size_t q) const { return yw.data()[i * points() + q]; }
  /// d_j w_i
  double dw(int i, int j, std::size_t q) const { return grad.data()[(2 * i + j) * points() + q]; }
  double dyw(int i, int j, std::size_t q) const { return ygrad.data()[(2 * i + j) * points() + q]; }
};

inline void store(PhysicalField& t, std::size_t q, const Sym2& s) {
  const std::size_t n = t.points();
  t.data()[q] = s.a11;
  t.data()[n + q] = s.a12;
  t.data()[2 * n + q] = s.a22;
}

}  // namespace tgf::detail
