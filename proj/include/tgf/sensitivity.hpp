#pragma once

#include "tgf/errors.hpp"
#include "tgf/field.hpp"
#include "tgf/grid.hpp"
#include "tgf/trajectory.hpp"

namespace tgf {

/// State trajectory v along which the sensitivity equations are linearized.
struct FrozenState {
  Trajectory v;
  FluidParams params;

  FrozenState(Trajectory v_, const FluidParams& p) : v(std::move(v_)), params(p) {}
  const TimeGrid& time() const { return v.time(); }
};

/// L_v m: the spatial operator of the linearized equation, with the
/// viscous term -nu A m included.
SpectralField linearized_operator(const SpectralField& m, const SpectralField& v, const FluidParams& p);

/// L*_v q: the L^2-adjoint of linearized_operator.
SpectralField adjoint_operator(const SpectralField& q, const SpectralField& v, const FluidParams& p);

/// Right-hand side of Upsilon(m)' = L_v m + P psi.
SpectralField linearized_rhs(const SpectralField& m, const SpectralField& v, const SpectralField& psi,
                             const FluidParams& p);

/// Right-hand side of -Upsilon(p)' = L*_v p + P g.
SpectralField adjoint_rhs(const SpectralField& p_field, const SpectralField& v, const SpectralField& g,
                          const FluidParams& params);

/// m(0) = 0, forward in time. Throws NonFiniteError.
Trajectory solve_linearized(const FrozenState& fs, const Trajectory& psi);

/// p(T) = 0: solves for q(t) = p(T - t) forward along the reversed state and
/// forcing, then reverses the result. Throws NonFiniteError.
Trajectory solve_adjoint(const FrozenState& fs, const Trajectory& g);

struct DualityResult {
  double lhs = 0.0;  // int (psi, p) dt
  double rhs = 0.0;  // int (g, m) dt
  double rel_residual = 0.0;
};

/// Trapezoidal pairing of the linearized and adjoint solutions.
DualityResult duality_residual(const Trajectory& psi, const Trajectory& p, const Trajectory& g,
                               const Trajectory& m);
DualityResult duality_residual(const FrozenState& fs, const Trajectory& psi, const Trajectory& g);

}  // namespace tgf
