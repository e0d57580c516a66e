#pragma once

// Integrating-factor RK4 shared by the state, linearized and adjoint solvers.

#include <cmath>
#include <string>
#include <vector>

#include "tgf/errors.hpp"
#include "tgf/trajectory.hpp"

namespace tgf::detail {

/// Per-mode decay rate -nu kappa^2 / (1 + a1 kappa^2) of the viscous part.
inline std::vector<double> viscous_rates(const TorusGrid& g, double nu, double a1) {
  std::vector<double> r(g.slot_count(), 0.0);
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    if (!g.active_index(idx)) continue;
    const double k2 = g.kappa_sq_index(idx);
    r[idx] = -nu * k2 / (1.0 + a1 * k2);
  }
  return r;
}

inline void apply_decay(SpectralField& y, const std::vector<double>& factor) {
  for (int c = 0; c < y.components(); ++c) {
    auto comp = y.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= factor[i];
  }
}

/// Lawson RK4 for y' = lambda y + N(n, frac, y), where N is evaluated at
/// t_n + frac dt. Returns the snapshots y_0..y_steps.
template <class Rhs>
Trajectory lawson_rk4(const SpectralField& y0, const TimeGrid& tg, Role role, const std::vector<double>& rates,
                      Rhs&& rhs, const char* where) {
  const double h = tg.dt();
  std::vector<double> half(rates.size()), full(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    half[i] = std::exp(0.5 * h * rates[i]);
    full[i] = std::exp(h * rates[i]);
  }
  std::vector<SpectralField> snaps;
  snaps.reserve(static_cast<std::size_t>(tg.steps()) + 1);
  snaps.push_back(y0);
  if (!y0.all_finite()) throw NonFiniteError(where, 0);
  for (int n = 0; n < tg.steps(); ++n) {
    const SpectralField& y = snaps.back();
    SpectralField yh = y;
    apply_decay(yh, half);

    const SpectralField k1 = rhs(n, 0.0, y);
    SpectralField ek1 = k1;
    apply_decay(ek1, half);

    SpectralField s = yh;
    s.axpy(0.5 * h, ek1);
    const SpectralField k2 = rhs(n, 0.5, s);

    s = yh;
    s.axpy(0.5 * h, k2);
    const SpectralField k3 = rhs(n, 0.5, s);

    SpectralField ek3 = k3;
    apply_decay(ek3, half);
    SpectralField yf = y;
    apply_decay(yf, full);
    s = yf;
    s.axpy(h, ek3);
    const SpectralField k4 = rhs(n, 1.0, s);

    SpectralField mid = k2;
    mid += k3;
    apply_decay(mid, half);
    SpectralField e1 = k1;
    apply_decay(e1, full);
    SpectralField next = yf;
    next.axpy(h / 6.0, e1);
    next.axpy(h / 3.0, mid);
    next.axpy(h / 6.0, k4);
    if (!next.all_finite()) throw NonFiniteError(where, n + 1);
    snaps.push_back(std::move(next));
  }
  return Trajectory(tg, role, std::move(snaps));
}

}  // namespace tgf::detail
