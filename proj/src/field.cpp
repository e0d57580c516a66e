#include "tgf/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tgf {

namespace {

void require_same_shape(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components()) {
    throw std::invalid_argument("SpectralField: grid or component mismatch");
  }
}

}  // namespace

void SpectralField::truncate() {
  const int n = grid_.slot_count();
  for (int idx = 0; idx < n; ++idx) {
    if (grid_.active_index(idx)) continue;
    for (int c = 0; c < ncomp_; ++c) at(c, idx) = 0.0;
  }
}

void SpectralField::set_zero() { std::fill(coeff_.begin(), coeff_.end(), cplx{}); }

double SpectralField::divergence_residual() const {
  if (ncomp_ != 2) throw std::logic_error("divergence_residual: velocity field expected");
  double num = 0.0;
  double den = 0.0;
  for (int idx = 0; idx < grid_.slot_count(); ++idx) {
    const double k1 = grid_.k1_of(idx);
    const double k2 = grid_.k2_of(idx);
    const cplx a = at(0, idx);
    const cplx b = at(1, idx);
    num = std::max(num, std::abs(k1 * a + k2 * b));
    den = std::max(den, std::hypot(k1, k2) * std::sqrt(std::norm(a) + std::norm(b)));
  }
  return den > 0.0 ? num / den : 0.0;
}

double SpectralField::hermitian_residual() const {
  double r = 0.0;
  for (int idx = 0; idx < grid_.slot_count(); ++idx) {
    const int k1 = grid_.k1_of(idx);
    const int k2 = grid_.k2_of(idx);
    if (!grid_.active(-k1, -k2)) continue;
    for (int c = 0; c < ncomp_; ++c) {
      r = std::max(r, std::abs(mode(c, -k1, -k2) - std::conj(at(c, idx))));
    }
  }
  return r;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeff_.begin(), coeff_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& z : coeff_) m = std::max(m, std::abs(z));
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& z : coeff_) z *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += s * o.coeff_[i];
  return *this;
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_shape(a, b);
  double acc = 0.0;
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
  const double L = a.grid().length();
  return L * L * acc;
}

double quadrature_inner(const PhysicalField& a, const PhysicalField& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components()) {
    throw std::invalid_argument("quadrature_inner: shape mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) acc += a.data()[i] * b.data()[i];
  return acc * a.grid().cell_area();
}

}  // namespace tgf
