#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tgf/operators.hpp"
#include "tgf/random_fields.hpp"
#include "tgf/transform.hpp"

using tgf::cplx;

namespace {

const tgf::TorusGrid kGrid8(2.0 * std::numbers::pi, 8);

/// Spectral derivative d_j of component c, computed mode by mode.
tgf::SpectralField derivative(const tgf::SpectralField& w, int j) {
  tgf::SpectralField d(w.grid(), w.components());
  const double b = w.grid().base_wavenumber();
  for (int c = 0; c < w.components(); ++c) {
    for (int idx = 0; idx < w.grid().slot_count(); ++idx) {
      const int k = j == 0 ? w.grid().k1_of(idx) : w.grid().k2_of(idx);
      d.at(c, idx) = cplx(0.0, b * k) * w.at(c, idx);
    }
  }
  return d;
}

/// Per-mode Leray projection written out directly.
void project_mode(cplx& a, cplx& b, int k1, int k2) {
  const double k2n = static_cast<double>(k1 * k1 + k2 * k2);
  const cplx dot = (static_cast<double>(k1) * a + static_cast<double>(k2) * b) / k2n;
  a -= static_cast<double>(k1) * dot;
  b -= static_cast<double>(k2) * dot;
}

}  // namespace

TEST_SUITE("spectral_core") {
  TEST_CASE("inverse transform matches direct synthesis and forward inverts it") {
    const tgf::SpectralField s = tgf::random_solenoidal(kGrid8, 3, 11);
    const tgf::PhysicalField p = tgf::fft_inverse(s);
    for (int c = 0; c < 2; ++c) {
      const auto direct = oracle::dft_synthesis(s, c);
      for (int j1 = 0; j1 < kGrid8.points(); ++j1) {
        for (int j2 = 0; j2 < kGrid8.points(); ++j2) CHECK(p.at(c, j1, j2) == doctest::Approx(direct[j1][j2]).epsilon(1e-12));
      }
    }
    const tgf::SpectralField back = tgf::fft_forward(p);
    for (std::size_t i = 0; i < s.data().size(); ++i) CHECK(std::abs(back.data()[i] - s.data()[i]) < 1e-14);
  }

  TEST_CASE("random fields are real, solenoidal and band-limited") {
    const tgf::SpectralField s = tgf::random_solenoidal(kGrid8, 2, 5);
    CHECK(s.hermitian_residual() < 1e-15);
    CHECK(s.solenoidal());
    CHECK(std::abs(s.mode(0, 3, 0)) == 0.0);
    CHECK(std::abs(s.mode(0, 0, 0)) == 0.0);
  }

  TEST_CASE("transport B agrees with a dense product evaluated by direct DFT") {
    const tgf::SpectralField u = tgf::random_solenoidal(kGrid8, 3, 21);
    const tgf::SpectralField v = tgf::random_solenoidal(kGrid8, 3, 22);
    const tgf::SpectralField B = tgf::transport_B(u, v);
    const auto u1 = oracle::dft_synthesis(u, 0), u2 = oracle::dft_synthesis(u, 1);
    const tgf::SpectralField d1 = derivative(v, 0), d2 = derivative(v, 1);
    std::vector<std::vector<std::vector<double>>> prod(2);
    for (int c = 0; c < 2; ++c) {
      const auto a = oracle::dft_synthesis(d1, c), b = oracle::dft_synthesis(d2, c);
      prod[c] = a;
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) prod[c][i][j] = u1[i][j] * a[i][j] + u2[i][j] * b[i][j];
      }
    }
    double err = 0.0, scale = 0.0;
    for (int k1 = -3; k1 <= 3; ++k1) {
      for (int k2 = -3; k2 <= 3; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        cplx a = oracle::dft_coefficient(prod[0], k1, k2), b = oracle::dft_coefficient(prod[1], k1, k2);
        project_mode(a, b, k1, k2);
        err = std::max({err, std::abs(a - B.mode(0, k1, k2)), std::abs(b - B.mode(1, k1, k2))});
        scale = std::max({scale, std::abs(a), std::abs(b)});
      }
    }
    CHECK(err <= 1e-12 * scale);
  }

  TEST_CASE("Rivlin tensor matches a closed-form evaluation") {
    const double L = 3.0, a = 0.7, b = -0.4;
    const tgf::TorusGrid g(L, 8);
    const double q = 2.0 * std::numbers::pi / L;
    // v = (a sin(q y), b sin(q x)): divergence free.
    tgf::SpectralField v(g);
    v.mode(0, 0, 1) = cplx(0.0, -a / 2);
    v.mode(0, 0, -1) = cplx(0.0, a / 2);
    v.mode(1, 1, 0) = cplx(0.0, -b / 2);
    v.mode(1, -1, 0) = cplx(0.0, b / 2);
    const tgf::PhysicalTensor A = tgf::rivlin_A(v);
    const int M = g.points();
    double err = 0.0;
    for (int j1 = 0; j1 < M; ++j1) {
      for (int j2 = 0; j2 < M; ++j2) {
        const double x = j1 * L / M, y = j2 * L / M;
        const double a12 = a * q * std::cos(q * y) + b * q * std::cos(q * x);
        err = std::max({err, std::abs(A.at(0, j1, j2)), std::abs(A.at(1, j1, j2) - a12), std::abs(A.at(2, j1, j2))});
      }
    }
    CHECK(err < 1e-13);
  }

  TEST_CASE("shear flow: |A|_4^4 closed form and <K(v), v>") {
    const double L = 2.5, amp = 0.9;
    const tgf::TorusGrid g(L, 8);
    tgf::SpectralField v(g);
    v.mode(0, 0, 1) = cplx(0.0, -amp / 2);
    v.mode(0, 0, -1) = cplx(0.0, amp / 2);
    const double q = 2.0 * std::numbers::pi / L;
    const double exact = 4.0 * std::pow(amp * q, 4) * 0.375 * L * L;
    CHECK(tgf::rivlin_l4_pow4(v) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(tgf::inner(tgf::op_K(v), v) == doctest::Approx(0.5 * exact).epsilon(1e-12));
    CHECK(tgf::inner(tgf::op_J(v), v) == doctest::Approx(0.0).scale(exact));
  }

  TEST_CASE("Poincare inequality and norm consistency") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const tgf::SpectralField v = tgf::random_solenoidal(kGrid8, 3, seed);
      const double l2 = tgf::hs_seminorm(v, 0.0), h1 = tgf::hs_seminorm(v, 1.0);
      CHECK(h1 * h1 >= kGrid8.lambda1() * l2 * l2 * (1 - 1e-14));
      CHECK(l2 * l2 == doctest::Approx(tgf::inner(v, v)).epsilon(1e-13));
      const tgf::FieldNorms n = tgf::norms(v);
      CHECK(n.stokes_l2 == doctest::Approx(tgf::hs_seminorm(v, 2.0)).epsilon(1e-13));
    }
  }

  TEST_CASE("Leray projection is idempotent and removes gradients") {
    tgf::SpectralField grad(kGrid8);
    const tgf::SpectralField phi = tgf::random_solenoidal(kGrid8, 3, 9);
    for (int idx = 0; idx < kGrid8.slot_count(); ++idx) {
      grad.at(0, idx) = cplx(0.0, kGrid8.k1_of(idx)) * phi.at(0, idx);
      grad.at(1, idx) = cplx(0.0, kGrid8.k2_of(idx)) * phi.at(0, idx);
    }
    grad.truncate();
    CHECK(tgf::leray_project(grad).max_abs() < 1e-15);
    const tgf::SpectralField mixed = phi + grad;
    const tgf::SpectralField p1 = tgf::leray_project(mixed);
    CHECK((tgf::leray_project(p1) - p1).max_abs() < 1e-15);
    CHECK(p1.solenoidal());
  }

  TEST_CASE("Upsilon solve inverts Upsilon apply") {
    const tgf::SpectralField v = tgf::random_solenoidal(kGrid8, 3, 4);
    CHECK((tgf::upsilon_solve(tgf::upsilon_apply(v, 0.3), 0.3) - v).max_abs() < 1e-15);
  }

  TEST_CASE("Cayley-Hamilton: tr(A^3) vanishes for traceless 2x2 A") {
    const tgf::SpectralField v = tgf::random_solenoidal(kGrid8, 3, 8);
    const tgf::PhysicalTensor A = tgf::rivlin_A(v);
    double worst = 0.0;
    for (std::size_t q = 0; q < A.points(); ++q) {
      const double a11 = A.data()[q], a12 = A.data()[A.points() + q], a22 = A.data()[2 * A.points() + q];
      CHECK(std::abs(a11 + a22) < 1e-12);
      const double tr3 = a11 * a11 * a11 + 3 * a11 * a12 * a12 + 3 * a22 * a12 * a12 + a22 * a22 * a22;
      worst = std::max(worst, std::abs(tr3));
    }
    CHECK(worst < 1e-11);
  }

  TEST_CASE("grid and fluid parameter validation") {
    CHECK_THROWS_AS(tgf::TorusGrid(1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(tgf::TorusGrid(-1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(tgf::FluidParams(0.1, 0.2, 1.0, 0.1), std::invalid_argument);
    CHECK_NOTHROW(tgf::FluidParams(0.1, 0.2, 1.0, 0.1, tgf::ThermoPolicy::warn));
  }
}
