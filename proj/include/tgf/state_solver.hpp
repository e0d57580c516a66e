#pragma once

#include <vector>

#include "tgf/errors.hpp"
#include "tgf/field.hpp"
#include "tgf/grid.hpp"
#include "tgf/noise.hpp"
#include "tgf/trajectory.hpp"

namespace tgf {

/// Per-snapshot diagnostics of a state run (length steps + 1 each).
struct StateRunReport {
  std::vector<double> t;
  std::vector<double> u_l2sq;     // ||u||_2^2
  std::vector<double> u_grad_l2sq; // ||grad u||_2^2
  std::vector<double> Au_l2sq;    // ||A u||_2^2
  std::vector<double> A32u_l2sq;  // ||A^{3/2} u||_2^2
  std::vector<double> Av_L4_4;    // ||A(u + z)||_4^4
  std::vector<double> energy_residual;
};

struct StateSolution {
  Trajectory u;
  StateRunReport report;
};

/// z-dependent forcing of the u-equation: z + (theta + a1 - nu) A z + theta a1 A^2 z.
SpectralField noise_coupling(const SpectralField& z, const FluidParams& p, double theta);

/// Right-hand side of Upsilon(u)' = -G(u, z) + P f + noise_coupling(z).
SpectralField state_rhs(const SpectralField& u, const SpectralField& z, const SpectralField& f,
                        const FluidParams& p, double theta);

/// Integrates the pathwise u-equation from u(0) = v0 with integrating-factor RK4.
/// f and z are sampled on the solver's time grid (z(0) = 0 for the OU splitting).
/// Throws NonFiniteError carrying the offending step.
StateSolution solve_state(const SpectralField& v0, const Trajectory& f, const Trajectory& z,
                          const FluidParams& p, double theta, bool with_report = true);

/// Semi-implicit Euler-Maruyama for the undecomposed equation
/// Upsilon(v_{n+1}) + dt nu A v_{n+1} = Upsilon(v_n) - dt (G - nu A)(v_n) + dt P f_n + dW_n,
/// with dW drawn from the same Gaussian stream as the OU route.
Trajectory solve_state_direct(const SpectralField& v0, const Trajectory& f, const NoiseSpec& noise,
                              std::uint64_t sample_index, const FluidParams& p);

/// Energy balance for E = (||u||^2 + a1 ||grad u||^2) / 2.
struct EnergyAudit {
  std::vector<double> energy;    // E(t_n)
  std::vector<double> power;     // (state_rhs, u) at t_n, equal to dE/dt
  std::vector<double> residual;  // |(E_{n+1} - E_n)/dt - mean power over the step|, first entry 0
  std::vector<double> dissipation; // nu ||grad u||^2 + beta/2 ||A(v)||_4^4
  std::vector<double> split_terms_sum; // I1 + I2 - I3 - I4 - I5 + I6 + I7
  std::vector<double> split_mismatch;  // |power + dissipation - split sum| / scale
};

/// The labelled terms of the energy balance at one instant, with v = u + z:
/// I1 = a1 b(z, u, A u), I2 = b(z, u, Upsilon z), I3 = b(u, z, u),
/// I4 = a1 b(u, z, A(u + z)), I5 = (a1 + a2)/2 int A(v)^2 : A(u),
/// I6 = beta/2 int |A(v)|^2 A(v) : A(z), I7 = (f + noise_coupling(z), u).
struct EnergyTerms {
  double I[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  double combined() const { return I[1] + I[2] - I[3] - I[4] - I[5] + I[6] + I[7]; }
};
EnergyTerms energy_terms(const SpectralField& u, const SpectralField& z, const SpectralField& f,
                         const FluidParams& p, double theta);

EnergyAudit energy_audit(const Trajectory& u, const Trajectory& z, const Trajectory& f, const FluidParams& p,
                         double theta);

}  // namespace tgf
