#include "tgf/random_fields.hpp"

#include <cmath>

#include "tgf/operators.hpp"
#include "tgf/rng.hpp"

namespace tgf {

SpectralField random_solenoidal(const TorusGrid& grid, int band, std::uint64_t seed, double amplitude,
                                double decay) {
  const Philox4x32 gen(seed);
  SpectralField out(grid, 2);
  for (int idx = 0; idx < grid.slot_count(); ++idx) {
    const int k1 = grid.k1_of(idx);
    const int k2 = grid.k2_of(idx);
    if (!grid.active(k1, k2) || std::abs(k1) > band || std::abs(k2) > band) continue;
    if (!(k2 > 0 || (k2 == 0 && k1 > 0))) continue;
    const double scale = amplitude * std::pow(1.0 + k1 * k1 + k2 * k2, -0.5 * decay);
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k2), 0x5eedu, 0u};
    const auto a = gaussian_pair(gen(ctr));
    const auto b = gaussian_pair(gen({ctr[0], ctr[1], ctr[2], 1u}));
    const cplx c0(a[0] * scale, a[1] * scale);
    const cplx c1(b[0] * scale, b[1] * scale);
    out.mode(0, k1, k2) = c0;
    out.mode(1, k1, k2) = c1;
    out.mode(0, -k1, -k2) = std::conj(c0);
    out.mode(1, -k1, -k2) = std::conj(c1);
  }
  return leray_project(out);
}

}  // namespace tgf
