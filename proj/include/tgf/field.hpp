#pragma once

#include <complex>
#include <span>
#include <vector>

#include "tgf/grid.hpp"

namespace tgf {

using cplx = std::complex<double>;

/// Fourier coefficients of a real periodic field on a TorusGrid.
///
/// Coefficients are Fourier-series amplitudes: w(x) = sum_k w_k exp(2 pi i k.x / L),
/// so the forward transform carries the 1/M^2 factor and the L^2 norm is
/// ||w||_2^2 = L^2 sum_k |w_k|^2. Velocity fields have two components;
/// symmetric 2x2 tensors are stored as three (11, 12, 22) and scalars as one.
/// Layout is [component][slot1][slot2].
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const TorusGrid& grid, int components = 2)
      : grid_(grid), ncomp_(components),
        coeff_(static_cast<std::size_t>(components) * grid.slot_count()) {}

  const TorusGrid& grid() const { return grid_; }
  int components() const { return ncomp_; }
  bool empty() const { return coeff_.empty(); }

  cplx& at(int c, int idx) { return coeff_[static_cast<std::size_t>(c) * grid_.slot_count() + idx]; }
  const cplx& at(int c, int idx) const {
    return coeff_[static_cast<std::size_t>(c) * grid_.slot_count() + idx];
  }
  /// Access by wavenumber pair.
  cplx& mode(int c, int k1, int k2) { return at(c, grid_.index(grid_.slot(k1), grid_.slot(k2))); }
  const cplx& mode(int c, int k1, int k2) const {
    return at(c, grid_.index(grid_.slot(k1), grid_.slot(k2)));
  }

  std::span<cplx> component(int c) {
    return {coeff_.data() + static_cast<std::size_t>(c) * grid_.slot_count(),
            static_cast<std::size_t>(grid_.slot_count())};
  }
  std::span<const cplx> component(int c) const {
    return {coeff_.data() + static_cast<std::size_t>(c) * grid_.slot_count(),
            static_cast<std::size_t>(grid_.slot_count())};
  }
  std::vector<cplx>& data() { return coeff_; }
  const std::vector<cplx>& data() const { return coeff_; }

  /// Zero the mean and Nyquist slots.
  void truncate();
  void set_zero();

  /// max_k |k . w_k| / max_k |k||w_k| (0 for the zero field).
  double divergence_residual() const;
  bool solenoidal(double rel_tol = 1e-12) const { return divergence_residual() <= rel_tol; }
  /// max |w_{-k} - conj(w_k)| over representable pairs.
  double hermitian_residual() const;
  bool all_finite() const;
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

  bool operator==(const SpectralField&) const = default;

 private:
  TorusGrid grid_;
  int ncomp_ = 0;
  std::vector<cplx> coeff_;
};

/// Collocation samples on the M x M grid, layout [component][j1][j2] with
/// x = (j1, j2) * L / M.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(const TorusGrid& grid, int components)
      : grid_(grid), ncomp_(components),
        samples_(static_cast<std::size_t>(components) * grid.points() * grid.points()) {}

  const TorusGrid& grid() const { return grid_; }
  int components() const { return ncomp_; }
  std::size_t points() const { return static_cast<std::size_t>(grid_.points()) * grid_.points(); }

  std::span<double> component(int c) { return {samples_.data() + c * points(), points()}; }
  std::span<const double> component(int c) const { return {samples_.data() + c * points(), points()}; }
  double& at(int c, int j1, int j2) { return samples_[c * points() + static_cast<std::size_t>(j1) * grid_.points() + j2]; }
  double at(int c, int j1, int j2) const {
    return samples_[c * points() + static_cast<std::size_t>(j1) * grid_.points() + j2];
  }
  std::vector<double>& data() { return samples_; }
  const std::vector<double>& data() const { return samples_; }

 private:
  TorusGrid grid_;
  int ncomp_ = 0;
  std::vector<double> samples_;
};

using PhysicalTensor = PhysicalField;

/// L^2(T^2) pairing of two fields with matching component count.
double inner(const SpectralField& a, const SpectralField& b);
/// Grid quadrature of sum_c a_c b_c.
double quadrature_inner(const PhysicalField& a, const PhysicalField& b);

}  // namespace tgf
