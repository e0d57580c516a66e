#include "tgf/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tgf/operators.hpp"

namespace tgf {

namespace {

bool canonical(int k1, int k2) { return k2 > 0 || (k2 == 0 && k1 > 0); }

bool inside_cutoff(const NoiseSpec& spec, int k1, int k2) {
  return std::sqrt(static_cast<double>(k1 * k1 + k2 * k2)) <= spec.cutoff;
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("noise.sigma must be finite and >= 0");
  if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("noise.gamma must lie in (0, 1/2)");
  if (!std::isfinite(s) || !(s > 4.0 - 2.0 * gamma)) {
    throw std::invalid_argument("noise.s violates the trace condition s > 4 - 2*gamma = " +
                                std::to_string(4.0 - 2.0 * gamma));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("noise.theta must be positive");
  if (!(cutoff > 0.0)) throw std::invalid_argument("noise.cutoff must be positive");
  if (c_hat && !(*c_hat > 0.0 && std::isfinite(*c_hat))) throw std::invalid_argument("noise.c_hat must be positive");
}

double NoiseSpec::variance(const TorusGrid& grid, int k1, int k2) const {
  if (sigma == 0.0 || !grid.active(k1, k2) || !inside_cutoff(*this, k1, k2)) return 0.0;
  return sigma * sigma * std::pow(grid.kappa_sq(k1, k2), -s);
}

double covariance_op_norm(const NoiseSpec& spec, const TorusGrid& grid) {
  double m = 0.0;
  for (int idx = 0; idx < grid.slot_count(); ++idx) {
    m = std::max(m, spec.variance(grid, grid.k1_of(idx), grid.k2_of(idx)));
  }
  return m;
}

double min_admissible_theta(const NoiseSpec& spec, const TorusGrid& grid, double c_hat) {
  return c_hat + covariance_op_norm(spec, grid) / grid.lambda1();
}

NoiseSpec resolve_noise_spec(NoiseSpec spec, const TorusGrid& grid) {
  spec.validate();
  if (spec.c_hat) {
    const double bound = min_admissible_theta(spec, grid, *spec.c_hat);
    if (!(spec.theta > bound)) spec.theta = bound + 1e-6 * std::max(1.0, bound);
  }
  return spec;
}

double weighted_trace(const NoiseSpec& spec, const TorusGrid& grid, double r) {
  double acc = 0.0;
  for (int idx = 0; idx < grid.slot_count(); ++idx) {
    const int k1 = grid.k1_of(idx);
    const int k2 = grid.k2_of(idx);
    const double c = spec.variance(grid, k1, k2);
    if (c == 0.0) continue;
    acc += (r == 0.0 ? 1.0 : std::pow(grid.kappa_sq(k1, k2), r)) * c;
  }
  return acc;
}

TraceDiagnostics trace_diagnostics(const NoiseSpec& spec, const TorusGrid& grid) {
  TraceDiagnostics d;
  d.tr_gg = weighted_trace(spec, grid, 0.0);
  d.tr_weighted_reg = weighted_trace(spec, grid, 3.0 - 2.0 * spec.gamma);
  d.op_norm = covariance_op_norm(spec, grid);
  d.min_theta = spec.c_hat.value_or(0.0) + d.op_norm / grid.lambda1();
  return d;
}

cplx NoisePath::draw(int k1, int k2, std::int64_t step) const {
  const bool conj = !canonical(k1, k2);
  if (conj) {
    k1 = -k1;
    k2 = -k2;
  }
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(sample_), static_cast<std::uint32_t>(step),
                                static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k2)};
  const auto g = gaussian_pair(gen_(ctr));
  const cplx xi(g[0] * std::numbers::sqrt2 / 2.0, g[1] * std::numbers::sqrt2 / 2.0);
  return conj ? std::conj(xi) : xi;
}

NoisePath sample_stream(const NoiseSpec& spec, std::uint64_t sample_index) {
  return NoisePath(spec.master_seed, sample_index);
}

void noise_direction(int k1, int k2, double& e1, double& e2) {
  const double n = std::sqrt(static_cast<double>(k1 * k1 + k2 * k2));
  e1 = -k2 / n;
  e2 = k1 / n;
}

namespace {

// Adds amp(k) * xi_k * e_k to every active mode, Hermitian-paired.
template <class Amp>
void add_noise(SpectralField& out, const NoiseSpec& spec, const NoisePath& path, std::int64_t step, Amp amp) {
  const TorusGrid& g = out.grid();
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    const int k1 = g.k1_of(idx);
    const int k2 = g.k2_of(idx);
    const double c = spec.variance(g, k1, k2);
    if (c == 0.0) continue;
    // e_{-k} = -e_k, so the coefficient at -k is the conjugate of the one at k.
    double e1 = 0.0, e2 = 0.0;
    noise_direction(k1, k2, e1, e2);
    const cplx eta = amp(c, k1, k2) * path.draw(k1, k2, step);
    out.at(0, idx) += canonical(k1, k2) ? eta * e1 : -eta * e1;
    out.at(1, idx) += canonical(k1, k2) ? eta * e2 : -eta * e2;
  }
}

}  // namespace

SpectralField ou_step(const SpectralField& Y, const NoiseSpec& spec, double dt, const NoisePath& path,
                      std::int64_t step) {
  if (!(dt > 0.0)) throw std::invalid_argument("ou_step: dt must be positive");
  const TorusGrid& g = Y.grid();
  SpectralField out(g, 2);
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    if (!g.active_index(idx)) continue;
    const double decay = std::exp(-spec.damping(g, g.k1_of(idx), g.k2_of(idx)) * dt);
    out.at(0, idx) = decay * Y.at(0, idx);
    out.at(1, idx) = decay * Y.at(1, idx);
  }
  add_noise(out, spec, path, step, [&](double c, int k1, int k2) {
    const double mu = spec.damping(g, k1, k2);
    return std::sqrt(c * (-std::expm1(-2.0 * mu * dt)) / (2.0 * mu));
  });
  return out;
}

SpectralField wiener_increment(const TorusGrid& grid, const NoiseSpec& spec, double dt, const NoisePath& path,
                               std::int64_t step) {
  SpectralField out(grid, 2);
  add_noise(out, spec, path, step, [dt](double c, int, int) { return std::sqrt(c * dt); });
  return out;
}

Trajectory noise_trajectory(const NoiseSpec& spec, double a1, const TorusGrid& grid, const TimeGrid& time,
                            std::uint64_t sample_index) {
  Trajectory z(grid, time, Role::noise_z);
  if (spec.sigma == 0.0) return z;
  const NoisePath path = sample_stream(spec, sample_index);
  SpectralField Y(grid, 2);
  for (int n = 0; n < time.steps(); ++n) {
    Y = ou_step(Y, spec, time.dt(), path, n);
    z[n + 1] = upsilon_solve(Y, a1);
  }
  return z;
}

}  // namespace tgf
