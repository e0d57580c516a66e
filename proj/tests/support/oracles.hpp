#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "tgf/field.hpp"
#include "tgf/grid.hpp"
#include "tgf/trajectory.hpp"

/// Reference computations that share no code with the library.
namespace oracle {

using cplx = std::complex<double>;

/// Direct O(M^4) synthesis of a spectral field on the M x M grid.
inline std::vector<std::vector<double>> dft_synthesis(const tgf::SpectralField& s, int comp) {
  const tgf::TorusGrid& g = s.grid();
  const int M = g.points(), N = g.modes();
  std::vector<std::vector<double>> out(M, std::vector<double>(M, 0.0));
  for (int j1 = 0; j1 < M; ++j1) {
    for (int j2 = 0; j2 < M; ++j2) {
      cplx acc = 0.0;
      for (int k1 = -N / 2 + 1; k1 <= N / 2; ++k1) {
        for (int k2 = -N / 2 + 1; k2 <= N / 2; ++k2) {
          const double ph = 2.0 * std::numbers::pi * (k1 * j1 + k2 * j2) / M;
          acc += s.mode(comp, k1, k2) * cplx(std::cos(ph), std::sin(ph));
        }
      }
      out[j1][j2] = acc.real();
    }
  }
  return out;
}

/// Direct analysis of grid samples: coefficient of exp(2 pi i k.x / L).
inline cplx dft_coefficient(const std::vector<std::vector<double>>& samples, int k1, int k2) {
  const int M = static_cast<int>(samples.size());
  cplx acc = 0.0;
  for (int j1 = 0; j1 < M; ++j1) {
    for (int j2 = 0; j2 < M; ++j2) {
      const double ph = -2.0 * std::numbers::pi * (k1 * j1 + k2 * j2) / M;
      acc += samples[j1][j2] * cplx(std::cos(ph), std::sin(ph));
    }
  }
  return acc / static_cast<double>(M * M);
}

/// Shear flow v = (0, a cos x + b sin x) on the 2 pi torus, stored in mode (1, 0).
inline tgf::SpectralField shear_field(const tgf::TorusGrid& grid, double a, double b) {
  tgf::SpectralField s(grid);
  s.mode(1, 1, 0) = cplx(a, -b) / 2.0;
  s.mode(1, -1, 0) = cplx(a, b) / 2.0;
  return s;
}

inline std::array<double, 2> shear_coefficients(const tgf::SpectralField& s) {
  const cplx c = s.mode(1, 1, 0);
  return {2.0 * c.real(), -2.0 * c.imag()};
}

using Vec2 = std::array<double, 2>;
using Forcing = std::function<Vec2(double)>;

/// Reduced Galerkin model of the shear mode with N = 4, L = 2 pi (kappa = 1):
/// (1 + a1) y' = -nu y - 1.5 beta |y|^2 y + f(t). The cubic stress of the shear
/// is 6 beta g'^2 g''; its first harmonic is -1.5 beta |y|^2 g.
struct ShearModel {
  double nu, a1, beta;

  Vec2 rate(const Vec2& y, const Vec2& f) const {
    const double r2 = y[0] * y[0] + y[1] * y[1];
    const double m = 1.0 + a1;
    return {(-nu * y[0] - 1.5 * beta * r2 * y[0] + f[0]) / m, (-nu * y[1] - 1.5 * beta * r2 * y[1] + f[1]) / m};
  }

  /// Jacobian of the right-hand side before division by (1 + a1); symmetric.
  std::array<double, 4> jacobian(const Vec2& y) const {
    const double r2 = y[0] * y[0] + y[1] * y[1];
    return {-nu - 1.5 * beta * (r2 + 2 * y[0] * y[0]), -3.0 * beta * y[0] * y[1], -3.0 * beta * y[0] * y[1],
            -nu - 1.5 * beta * (r2 + 2 * y[1] * y[1])};
  }
};

inline Vec2 add(const Vec2& a, const Vec2& b, double s) { return {a[0] + s * b[0], a[1] + s * b[1]}; }

/// Classical RK4 for y' = rate(t, y) over `steps` steps of size h; returns y_0..y_steps.
template <class Rate>
std::vector<Vec2> rk4(Vec2 y, double h, int steps, Rate rate) {
  std::vector<Vec2> out{y};
  for (int n = 0; n < steps; ++n) {
    const double t = n * h;
    const Vec2 k1 = rate(t, y);
    const Vec2 k2 = rate(t + h / 2, add(y, k1, h / 2));
    const Vec2 k3 = rate(t + h / 2, add(y, k2, h / 2));
    const Vec2 k4 = rate(t + h, add(y, k3, h));
    for (int i = 0; i < 2; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    out.push_back(y);
  }
  return out;
}

/// State, linearized and adjoint solutions of the shear model on a fine grid.
/// The state is resolved at every half step so the sensitivity RK4 stages see
/// exact stage values; m and p are returned on the full steps t_n = n T / steps.
struct ShearSolution {
  std::vector<Vec2> y;  // y(t_n)
  std::vector<Vec2> m;  // linearized, m(0) = 0
  std::vector<Vec2> p;  // adjoint, p(T) = 0
};

inline ShearSolution shear_solve(const ShearModel& model, Vec2 y0, const Forcing& f, const Forcing& psi,
                                 const Forcing& g, double T, int steps) {
  const double h = T / steps;
  const std::vector<Vec2> half =
      rk4(y0, h / 2, 2 * steps, [&](double t, const Vec2& y) { return model.rate(y, f(t)); });
  auto state_at = [&](double t) { return half[static_cast<std::size_t>(std::lround(t / (h / 2)))]; };
  const double mass = 1.0 + model.a1;
  auto apply = [&](const Vec2& y, const Vec2& x, const Vec2& src) {
    const auto jac = model.jacobian(y);
    return Vec2{(jac[0] * x[0] + jac[1] * x[1] + src[0]) / mass, (jac[2] * x[0] + jac[3] * x[1] + src[1]) / mass};
  };
  ShearSolution s;
  for (int n = 0; n <= steps; ++n) s.y.push_back(half[2 * n]);
  s.m = rk4({0.0, 0.0}, h, steps, [&](double t, const Vec2& x) { return apply(state_at(t), x, psi(t)); });
  std::vector<Vec2> q =
      rk4({0.0, 0.0}, h, steps, [&](double t, const Vec2& x) { return apply(state_at(T - t), x, g(T - t)); });
  s.p.assign(q.rbegin(), q.rend());
  return s;
}

/// Composite Simpson rule on equally spaced samples (even interval count).
inline double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size() - 1;
  double acc = y.front() + y.back();
  for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
  return acc * h / 3.0;
}

}  // namespace oracle
