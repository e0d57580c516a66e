#pragma once

#include "tgf/field.hpp"

namespace tgf {

/// Forward transform (1/M^2 normalization) of every component, restricted to
/// the active band. Throws std::invalid_argument on a malformed sample array.
SpectralField fft_forward(const PhysicalField& p);

/// Zero-padded synthesis of every component on the grid's M x M points.
PhysicalField fft_inverse(const SpectralField& s);

/// Velocity gradient L_ij = d_j w_i, stored as component 2*i + j.
SpectralField spectral_gradient(const SpectralField& w);

/// Divergence of a symmetric tensor stored as (11, 12, 22).
SpectralField spectral_divergence_sym(const SpectralField& tensor);

/// Symmetric gradient A(w) = grad w + grad w^T as (11, 12, 22).
SpectralField spectral_rivlin(const SpectralField& w);

}  // namespace tgf
