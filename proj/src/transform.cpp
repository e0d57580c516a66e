#include "tgf/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace tgf {

namespace {

// fftw_execute_dft_* is thread-safe; planning is not, hence the mutex.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~PlanPair() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

const PlanPair& plans_for(int M) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return *it->second;
  auto pp = std::make_unique<PlanPair>();
  const std::size_t half = static_cast<std::size_t>(M) * (M / 2 + 1);
  std::vector<double> real(static_cast<std::size_t>(M) * M);
  std::vector<cplx> spec(half);
  auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  pp->r2c = fftw_plan_dft_r2c_2d(M, M, real.data(), spec_ptr, flags);
  pp->c2r = fftw_plan_dft_c2r_2d(M, M, spec_ptr, real.data(), flags);
  if (!pp->r2c || !pp->c2r) throw std::runtime_error("fftw planning failed");
  return *cache.emplace(M, std::move(pp)).first->second;
}

inline int wrap(int k, int M) { return k < 0 ? k + M : k; }

}  // namespace

SpectralField fft_forward(const PhysicalField& p) {
  const TorusGrid& g = p.grid();
  const int M = g.points();
  const int H = M / 2 + 1;
  if (p.components() <= 0 || p.data().size() != static_cast<std::size_t>(p.components()) * M * M) {
    throw std::invalid_argument("fft_forward: sample array does not match the grid");
  }
  const PlanPair& plans = plans_for(M);
  SpectralField out(g, p.components());
  std::vector<double> real(static_cast<std::size_t>(M) * M);
  std::vector<cplx> half(static_cast<std::size_t>(M) * H);
  const double scale = 1.0 / (static_cast<double>(M) * M);
  for (int c = 0; c < p.components(); ++c) {
    auto src = p.component(c);
    std::copy(src.begin(), src.end(), real.begin());
    fftw_execute_dft_r2c(plans.r2c, real.data(), reinterpret_cast<fftw_complex*>(half.data()));
    for (int idx = 0; idx < g.slot_count(); ++idx) {
      const int k1 = g.k1_of(idx);
      const int k2 = g.k2_of(idx);
      if (!g.active(k1, k2)) continue;
      cplx v;
      if (k2 >= 0) {
        v = half[static_cast<std::size_t>(wrap(k1, M)) * H + k2];
      } else {
        v = std::conj(half[static_cast<std::size_t>(wrap(-k1, M)) * H + (-k2)]);
      }
      out.at(c, idx) = v * scale;
    }
  }
  return out;
}

PhysicalField fft_inverse(const SpectralField& s) {
  const TorusGrid& g = s.grid();
  const int M = g.points();
  const int H = M / 2 + 1;
  const PlanPair& plans = plans_for(M);
  PhysicalField out(g, s.components());
  std::vector<cplx> half(static_cast<std::size_t>(M) * H);
  for (int c = 0; c < s.components(); ++c) {
    std::fill(half.begin(), half.end(), cplx{});
    for (int idx = 0; idx < g.slot_count(); ++idx) {
      const int k1 = g.k1_of(idx);
      const int k2 = g.k2_of(idx);
      if (k2 < 0 || !g.active(k1, k2)) continue;
      half[static_cast<std::size_t>(wrap(k1, M)) * H + k2] = s.at(c, idx);
    }
    auto dst = out.component(c);
    fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(half.data()), dst.data());
  }
  return out;
}

SpectralField spectral_gradient(const SpectralField& w) {
  const TorusGrid& g = w.grid();
  const double b = g.base_wavenumber();
  SpectralField out(g, 2 * w.components());
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    const cplx ik[2] = {cplx(0.0, b * g.k1_of(idx)), cplx(0.0, b * g.k2_of(idx))};
    for (int i = 0; i < w.components(); ++i) {
      for (int j = 0; j < 2; ++j) out.at(2 * i + j, idx) = ik[j] * w.at(i, idx);
    }
  }
  return out;
}

SpectralField spectral_divergence_sym(const SpectralField& t) {
  if (t.components() != 3) throw std::invalid_argument("spectral_divergence_sym: expected (11,12,22)");
  const TorusGrid& g = t.grid();
  const double b = g.base_wavenumber();
  SpectralField out(g, 2);
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    const cplx i1(0.0, b * g.k1_of(idx));
    const cplx i2(0.0, b * g.k2_of(idx));
    out.at(0, idx) = i1 * t.at(0, idx) + i2 * t.at(1, idx);
    out.at(1, idx) = i1 * t.at(1, idx) + i2 * t.at(2, idx);
  }
  return out;
}

SpectralField spectral_rivlin(const SpectralField& w) {
  const TorusGrid& g = w.grid();
  const double b = g.base_wavenumber();
  SpectralField out(g, 3);
  for (int idx = 0; idx < g.slot_count(); ++idx) {
    const cplx i1(0.0, b * g.k1_of(idx));
    const cplx i2(0.0, b * g.k2_of(idx));
    out.at(0, idx) = 2.0 * i1 * w.at(0, idx);
    out.at(1, idx) = i2 * w.at(0, idx) + i1 * w.at(1, idx);
    out.at(2, idx) = 2.0 * i2 * w.at(1, idx);
  }
  return out;
}

}  // namespace tgf
