#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgf/field.hpp"
#include "tgf/grid.hpp"

namespace tgf {

/// Uniform time grid t_n = n dt, n = 0..steps. The step is stored and the
/// horizon derived from it, so steps * dt == T holds by construction.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double horizon, int steps);
  static TimeGrid from_step(double dt, int steps);

  double T() const { return dt_ * steps_; }
  int steps() const { return steps_; }
  double dt() const { return dt_; }
  double t(int n) const { return n * dt_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  double dt_ = 1.0;
  int steps_ = 1;
};

enum class Role : std::uint32_t {
  state_u = 0,
  noise_z = 1,
  state_v = 2,
  linearized_m = 3,
  adjoint_p = 4,
  target_vd = 5,
  control_f = 6,
};

std::string role_name(Role r);

/// Snapshots of a velocity field at t_0..t_steps on one grid.
class Trajectory {
 public:
  Trajectory() = default;
  /// All snapshots zero.
  Trajectory(const TorusGrid& grid, const TimeGrid& time, Role role);
  Trajectory(const TimeGrid& time, Role role, std::vector<SpectralField> snapshots);

  const TorusGrid& grid() const { return grid_; }
  const TimeGrid& time() const { return time_; }
  Role role() const { return role_; }
  int steps() const { return time_.steps(); }
  std::size_t size() const { return snaps_.size(); }

  SpectralField& operator[](std::size_t n) { return snaps_[n]; }
  const SpectralField& operator[](std::size_t n) const { return snaps_[n]; }
  const std::vector<SpectralField>& snapshots() const { return snaps_; }

  /// Same data under another role tag.
  Trajectory relabeled(Role role) const;

  /// Value at t_n + frac dt by 4-point Lagrange interpolation of the
  /// snapshots (one-sided stencils at the ends, lower order when steps < 3).
  SpectralField at(int n, double frac) const;

  /// Snapshot order reversed: out[n] = this[steps - n].
  Trajectory reversed() const;

  /// Every stride-th snapshot on the coarser time grid; steps % stride == 0.
  Trajectory subsample(int stride) const;

  /// Trapezoidal approximation of int_0^T (a(t), b(t)) dt.
  friend double time_inner(const Trajectory& a, const Trajectory& b);

  Trajectory& operator+=(const Trajectory& o);
  Trajectory& operator-=(const Trajectory& o);
  Trajectory& operator*=(double s);
  Trajectory& axpy(double s, const Trajectory& o);

  bool all_finite() const;
  bool operator==(const Trajectory&) const = default;

 private:
  void require_compatible(const Trajectory& o, const char* where) const;

  TorusGrid grid_;
  TimeGrid time_;
  Role role_ = Role::state_u;
  std::vector<SpectralField> snaps_;
};

double time_inner(const Trajectory& a, const Trajectory& b);

/// Trapezoidal approximation of int_0^T ||A^{s/2} w(t)||_2^2 dt.
double time_norm_sq(const Trajectory& w, double s = 0.0);

/// Weights of the 4-point Lagrange interpolant at t_n + frac dt over the
/// nodes first..first+count-1, for a grid with the given number of steps.
struct StencilWeights {
  int first = 0;
  int count = 0;
  double w[4] = {0.0, 0.0, 0.0, 0.0};
};
StencilWeights interpolation_stencil(int steps, int n, double frac);

/// Leray projection of every snapshot.
Trajectory leray_projected(const Trajectory& w);

/// Snapshot-wise v = u + z.
Trajectory reconstruct_v(const Trajectory& u, const Trajectory& z);

}  // namespace tgf
