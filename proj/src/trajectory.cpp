#include "tgf/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tgf/operators.hpp"

namespace tgf {

TimeGrid::TimeGrid(double horizon, int steps) : dt_(horizon / steps), steps_(steps) {
  if (steps <= 0) throw std::invalid_argument("TimeGrid: steps must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("TimeGrid: T must be positive");
}

TimeGrid TimeGrid::from_step(double dt, int steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: dt must be positive");
  TimeGrid g(dt * steps, steps);
  g.dt_ = dt;
  return g;
}

std::string role_name(Role r) {
  switch (r) {
    case Role::state_u: return "state_u";
    case Role::noise_z: return "noise_z";
    case Role::state_v: return "state_v";
    case Role::linearized_m: return "linearized_m";
    case Role::adjoint_p: return "adjoint_p";
    case Role::target_vd: return "target_vd";
    case Role::control_f: return "control_f";
  }
  return "unknown";
}

Trajectory::Trajectory(const TorusGrid& grid, const TimeGrid& time, Role role)
    : grid_(grid), time_(time), role_(role),
      snaps_(static_cast<std::size_t>(time.steps()) + 1, SpectralField(grid, 2)) {}

Trajectory::Trajectory(const TimeGrid& time, Role role, std::vector<SpectralField> snapshots)
    : time_(time), role_(role), snaps_(std::move(snapshots)) {
  if (snaps_.size() != static_cast<std::size_t>(time.steps()) + 1) {
    throw std::invalid_argument("Trajectory: snapshot count must equal steps + 1");
  }
  grid_ = snaps_.front().grid();
  for (const auto& s : snaps_) {
    if (!(s.grid() == grid_) || s.components() != 2) {
      throw std::invalid_argument("Trajectory: snapshots must share one grid");
    }
  }
}

Trajectory Trajectory::relabeled(Role role) const {
  Trajectory out = *this;
  out.role_ = role;
  return out;
}

StencilWeights interpolation_stencil(int steps, int n, double frac) {
  StencilWeights sw;
  sw.count = std::min(4, steps + 1);
  if (sw.count == 4) {
    sw.first = std::clamp(n - 1, 0, steps - 3);
  } else {
    sw.first = 0;
  }
  const double x = (n - sw.first) + frac;
  for (int j = 0; j < sw.count; ++j) {
    double w = 1.0;
    for (int m = 0; m < sw.count; ++m) {
      if (m != j) w *= (x - m) / static_cast<double>(j - m);
    }
    sw.w[j] = w;
  }
  return sw;
}

SpectralField Trajectory::at(int n, double frac) const {
  if (frac == 0.0) return snaps_.at(static_cast<std::size_t>(n));
  if (frac == 1.0) return snaps_.at(static_cast<std::size_t>(n) + 1);
  const StencilWeights sw = interpolation_stencil(steps(), n, frac);
  SpectralField out(grid_, 2);
  for (int j = 0; j < sw.count; ++j) out.axpy(sw.w[j], snaps_[sw.first + j]);
  return out;
}

Trajectory Trajectory::reversed() const {
  Trajectory out = *this;
  const std::size_t n = snaps_.size();
  for (std::size_t i = 0; i < n; ++i) out.snaps_[i] = snaps_[n - 1 - i];
  return out;
}

Trajectory Trajectory::subsample(int stride) const {
  if (stride <= 0 || steps() % stride != 0) {
    throw std::invalid_argument("Trajectory::subsample: stride must divide the step count");
  }
  std::vector<SpectralField> s;
  for (int n = 0; n <= steps(); n += stride) s.push_back(snaps_[n]);
  return Trajectory(TimeGrid::from_step(time_.dt() * stride, steps() / stride), role_, std::move(s));
}

void Trajectory::require_compatible(const Trajectory& o, const char* where) const {
  if (!(grid_ == o.grid_) || !(time_ == o.time_)) {
    throw std::invalid_argument(std::string(where) + ": trajectories on different grids");
  }
}

double time_inner(const Trajectory& a, const Trajectory& b) {
  a.require_compatible(b, "time_inner");
  const int n = a.steps();
  double acc = 0.5 * (inner(a[0], b[0]) + inner(a[n], b[n]));
  for (int i = 1; i < n; ++i) acc += inner(a[i], b[i]);
  return acc * a.time().dt();
}

double time_norm_sq(const Trajectory& w, double s) {
  const int n = w.steps();
  auto sq = [&](int i) {
    const double h = hs_seminorm(w[i], s);
    return h * h;
  };
  double acc = 0.5 * (sq(0) + sq(n));
  for (int i = 1; i < n; ++i) acc += sq(i);
  return acc * w.time().dt();
}

Trajectory& Trajectory::operator+=(const Trajectory& o) {
  require_compatible(o, "Trajectory +=");
  for (std::size_t i = 0; i < snaps_.size(); ++i) snaps_[i] += o.snaps_[i];
  return *this;
}

Trajectory& Trajectory::operator-=(const Trajectory& o) {
  require_compatible(o, "Trajectory -=");
  for (std::size_t i = 0; i < snaps_.size(); ++i) snaps_[i] -= o.snaps_[i];
  return *this;
}

Trajectory& Trajectory::operator*=(double s) {
  for (auto& f : snaps_) f *= s;
  return *this;
}

Trajectory& Trajectory::axpy(double s, const Trajectory& o) {
  require_compatible(o, "Trajectory axpy");
  for (std::size_t i = 0; i < snaps_.size(); ++i) snaps_[i].axpy(s, o.snaps_[i]);
  return *this;
}

bool Trajectory::all_finite() const {
  for (const auto& f : snaps_) {
    if (!f.all_finite()) return false;
  }
  return true;
}

Trajectory leray_projected(const Trajectory& w) {
  Trajectory out = w;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = leray_project(w[n]);
  return out;
}

Trajectory reconstruct_v(const Trajectory& u, const Trajectory& z) {
  Trajectory v = u.relabeled(Role::state_v);
  v += z;
  return v;
}

}  // namespace tgf
