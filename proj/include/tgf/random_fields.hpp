#pragma once

#include <cstdint>

#include "tgf/field.hpp"

namespace tgf {

/// Random real, solenoidal velocity field supported on max(|k1|, |k2|) <= band.
/// Mode k gets a complex Gaussian vector of scale amplitude * (1 + |k|^2)^(-decay/2),
/// then the Leray projection. Seeded through Philox, so results are portable.
SpectralField random_solenoidal(const TorusGrid& grid, int band, std::uint64_t seed, double amplitude = 1.0,
                                double decay = 2.0);

}  // namespace tgf
