#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tgf {

/// Periodic square [0,L]^2 resolved by N Fourier modes per direction and
/// evaluated on an M x M collocation grid for nonlinear products.
///
/// Mode slots i in [0,N) map to wavenumbers k = i - N/2 + 1, i.e. the set
/// -N/2 < k <= N/2. The zero mode carries no coefficient (mean-zero fields).
/// The Nyquist slot k = N/2 cannot hold a Hermitian pair and is always kept
/// at zero, so the active band is |k_i| <= N/2 - 1.
class TorusGrid {
 public:
  TorusGrid() = default;
  TorusGrid(double length, int modes, int points = 0)
      : L_(length), N_(modes), M_(points == 0 ? 2 * modes : points) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw std::invalid_argument("TorusGrid: length must be positive and finite");
    }
    if (modes < 4 || modes % 2 != 0) {
      throw std::invalid_argument("TorusGrid: N must be even and >= 4, got " + std::to_string(modes));
    }
    if (M_ < 2 * modes || M_ % 2 != 0) {
      throw std::invalid_argument("TorusGrid: M must be even and >= 2N, got " + std::to_string(M_));
    }
  }

  double length() const { return L_; }
  int modes() const { return N_; }
  int points() const { return M_; }

  /// Slots per component (N^2, including the zero and Nyquist slots).
  int slot_count() const { return N_ * N_; }
  /// Size of the active set K_N as stored in trajectory files (N^2 - 1).
  int file_mode_count() const { return N_ * N_ - 1; }

  int wavenumber(int slot) const { return slot - N_ / 2 + 1; }
  int slot(int k) const { return k + N_ / 2 - 1; }
  int index(int slot1, int slot2) const { return slot1 * N_ + slot2; }
  int k1_of(int idx) const { return wavenumber(idx / N_); }
  int k2_of(int idx) const { return wavenumber(idx % N_); }

  /// True when k carries a degree of freedom (non-zero, below Nyquist).
  bool active(int k1, int k2) const {
    const int lim = N_ / 2;
    return !(k1 == 0 && k2 == 0) && k1 < lim && k2 < lim && k1 > -lim && k2 > -lim;
  }
  bool active_index(int idx) const { return active(k1_of(idx), k2_of(idx)); }

  double base_wavenumber() const { return 2.0 * std::numbers::pi / L_; }
  /// kappa(k)^2 = (2 pi |k| / L)^2
  double kappa_sq(int k1, int k2) const {
    const double b = base_wavenumber();
    return b * b * static_cast<double>(k1 * k1 + k2 * k2);
  }
  double kappa_sq_index(int idx) const { return kappa_sq(k1_of(idx), k2_of(idx)); }

  /// Smallest Stokes eigenvalue, 4 pi^2 / L^2.
  double lambda1() const { return base_wavenumber() * base_wavenumber(); }
  /// Cell area of the collocation grid (quadrature weight).
  double cell_area() const { return (L_ / M_) * (L_ / M_); }

  bool operator==(const TorusGrid&) const = default;

 private:
  double L_ = 2.0 * std::numbers::pi;
  int N_ = 4;
  int M_ = 8;
};

enum class ThermoPolicy { enforce, warn };

/// Material constants of the third-grade fluid.
struct FluidParams {
  double nu = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;

  FluidParams() = default;
  FluidParams(double nu_, double alpha1_, double alpha2_, double beta_,
              ThermoPolicy policy = ThermoPolicy::enforce);

  /// sqrt(24 nu beta), the admissible bound on |alpha1 + alpha2|.
  double thermo_bound() const { return std::sqrt(24.0 * nu * beta); }
  bool thermo_admissible() const;
};

}  // namespace tgf
