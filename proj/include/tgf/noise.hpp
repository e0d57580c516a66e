#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "tgf/field.hpp"
#include "tgf/grid.hpp"
#include "tgf/rng.hpp"
#include "tgf/trajectory.hpp"

namespace tgf {

/// Diagonal trace-class covariance on the divergence-free Fourier basis,
/// c_k = sigma^2 kappa(k)^{-2s} for |k| <= cutoff, and the damping theta of
/// the Ornstein-Uhlenbeck equation d Y + (1 + theta A) Y dt = dW, Y = Upsilon(z).
struct NoiseSpec {
  double sigma = 0.0;
  double s = 4.0;
  double gamma = 0.25;
  double theta = 1.0;
  double cutoff = std::numeric_limits<double>::infinity();
  std::uint64_t master_seed = 0;
  std::optional<double> c_hat;

  /// Checks gamma in (0, 1/2), theta > 0, sigma >= 0 and the trace
  /// condition s > 4 - 2 gamma. Throws std::invalid_argument.
  void validate() const;

  /// Variance rate of the complex coefficient of mode k (E|W_k(t)|^2 = c_k t).
  double variance(const TorusGrid& grid, int k1, int k2) const;
  /// mu_k = 1 + theta kappa^2.
  double damping(const TorusGrid& grid, int k1, int k2) const {
    return 1.0 + theta * grid.kappa_sq(k1, k2);
  }
};

/// ||GG*||_Op = max_k c_k over the active band.
double covariance_op_norm(const NoiseSpec& spec, const TorusGrid& grid);

/// Smallest theta satisfying theta > c_hat + ||GG*||_Op / lambda_1 (returned
/// as the boundary value; admissible thetas are strictly larger).
double min_admissible_theta(const NoiseSpec& spec, const TorusGrid& grid, double c_hat);

/// Validates the spec and, when c_hat is set, raises theta just above the
/// admissible boundary if needed.
NoiseSpec resolve_noise_spec(NoiseSpec spec, const TorusGrid& grid);

struct TraceDiagnostics {
  double tr_gg = 0.0;          // sum c_k
  double tr_weighted_reg = 0.0; // sum kappa^{2(3 - 2 gamma)} c_k
  double op_norm = 0.0;        // max c_k
  double min_theta = 0.0;      // c_hat + op_norm / lambda_1 (c_hat = 0 when unset)
};

/// Finite sums over K_N; each lattice vector k (and -k) counts once.
TraceDiagnostics trace_diagnostics(const NoiseSpec& spec, const TorusGrid& grid);
/// sum_k kappa^{2r} c_k over K_N.
double weighted_trace(const NoiseSpec& spec, const TorusGrid& grid, double r);

/// Reproducible complex Gaussian stream for one Monte-Carlo sample. The draw
/// for (mode k, step n) is a pure function of (master_seed, sample, k, n);
/// draws for -k are conjugates of those for k.
class NoisePath {
 public:
  NoisePath(std::uint64_t master_seed, std::uint64_t sample_index)
      : gen_(master_seed), sample_(sample_index) {}

  /// Standard complex normal (E|xi|^2 = 1) for wavenumber k at step n.
  cplx draw(int k1, int k2, std::int64_t step) const;

  std::uint64_t sample_index() const { return sample_; }

 private:
  Philox4x32 gen_;
  std::uint64_t sample_;
};

NoisePath sample_stream(const NoiseSpec& spec, std::uint64_t sample_index);

/// Unit divergence-free direction k_perp / |k| for the noise basis.
void noise_direction(int k1, int k2, double& e1, double& e2);

/// Exact OU update of Y = Upsilon(z):
/// Y_k <- exp(-mu_k dt) Y_k + eta_k, Var(eta_k) = c_k (1 - exp(-2 mu_k dt)) / (2 mu_k).
SpectralField ou_step(const SpectralField& Y, const NoiseSpec& spec, double dt, const NoisePath& path,
                      std::int64_t step);

/// Brownian increment dW over one step, using the same Gaussian draws as ou_step.
SpectralField wiener_increment(const TorusGrid& grid, const NoiseSpec& spec, double dt, const NoisePath& path,
                               std::int64_t step);

/// z(t_n), n = 0..steps, for one sample: Y = Upsilon(z) advanced by ou_step
/// from Y(0) = 0 and mapped back with upsilon_solve.
Trajectory noise_trajectory(const NoiseSpec& spec, double a1, const TorusGrid& grid, const TimeGrid& time,
                            std::uint64_t sample_index);

}  // namespace tgf
