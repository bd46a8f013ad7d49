#pragma once

// Shared generators and brute-force oracles for the test suite.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "surfcr/surfcr.hpp"

namespace test {

using surfcr::Mat3;
using surfcr::Vec3;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x5eedc0ffeeULL);
  return engine;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Vec3 random_unit() {
  std::normal_distribution<double> n;
  Vec3 v;
  do {
    v = {n(rng()), n(rng()), n(rng())};
  } while (v.norm() < 1e-3);
  return v.normalized();
}

/// Point of the surface from its parametrisation, independent of closest_point.
inline Vec3 random_sphere_point(double radius = 1.0) { return radius * random_unit(); }

inline Vec3 torus_point(double theta, double psi, double R = 1.0, double r = 0.5) {
  return {(R + r * std::cos(psi)) * std::cos(theta), (R + r * std::cos(psi)) * std::sin(theta), r * std::sin(psi)};
}

inline Vec3 torus_normal(double theta, double psi) {
  return {std::cos(psi) * std::cos(theta), std::cos(psi) * std::sin(theta), std::sin(psi)};
}

inline Vec3 random_torus_point() {
  return torus_point(uniform(0, 2 * std::numbers::pi), uniform(0, 2 * std::numbers::pi));
}

inline Vec3 random_surface_point(const surfcr::LevelSurface& s) {
  return s.is_torus() ? random_torus_point() : random_sphere_point();
}

/// Random point of the tube: a surface point moved along its exact normal.
inline Vec3 random_tube_point(const surfcr::LevelSurface& s, double fraction = 0.95) {
  const double d = uniform(-fraction, fraction) * s.delta();
  if (s.is_torus()) {
    const double t = uniform(0, 2 * std::numbers::pi), p = uniform(0, 2 * std::numbers::pi);
    return torus_point(t, p) + d * torus_normal(t, p);
  }
  const Vec3 n = random_unit();
  return (1.0 + d) * n;
}

/// Central-difference gradient of a scalar function.
inline Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x, double h) {
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    g[i] = (f(x + e) - f(x - e)) / (2 * h);
  }
  return g;
}

/// Central-difference Hessian of a scalar function.
inline Mat3 fd_hessian(const std::function<double(const Vec3&)>& f, const Vec3& x, double h) {
  Mat3 H;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Vec3 ei = Vec3::Zero(), ej = Vec3::Zero();
      ei[i] = h;
      ej[j] = h;
      H(i, j) = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h);
    }
  }
  return H;
}

/// Central-difference Jacobian of a vector function; column j is d/dx_j.
inline Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, double h) {
  Mat3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    J.col(j) = (f(x + e) - f(x - e)) / (2 * h);
  }
  return J;
}

/// Brute-force tangential calculus on the normal extension u~ = u o p, using
/// only closest_point and plain double evaluation of the ambient expressions.
struct FdTangentialOracle {
  const surfcr::TangentialFieldSpec& spec;
  double step = 1e-4;

  Vec3 u(const Vec3& y) const {
    const auto sp = spec.surface.closest_point(y);
    return sp.projector * surfcr::eval(spec.ambient, sp.position);
  }
  Vec3 extended(const Vec3& x) const { return u(spec.surface.closest_point(x).position); }

  /// P J_{u~} P at the lift of x (x in the tube).
  Mat3 gradient(const Vec3& x) const {
    const auto sp = spec.surface.closest_point(x);
    const Mat3 J = fd_jacobian([this](const Vec3& z) { return extended(z); }, sp.position, step);
    return sp.projector * J * sp.projector;
  }

  /// P div_Gamma(grad_Gamma u), row-wise divergence of the extended gradient.
  Vec3 bochner_laplacian(const Vec3& y) const {
    const Mat3 P = spec.surface.closest_point(y).projector;
    Vec3 div = Vec3::Zero();
    for (int m = 0; m < 3; ++m) {
      Vec3 e = Vec3::Zero();
      e[m] = step;
      const Mat3 dA = (gradient(y + e) - gradient(y - e)) / (2 * step);
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) div[a] += P(b, m) * dA(a, b);
      }
    }
    return P * div;
  }

  Vec3 rhs(const Vec3& y) const { return -bochner_laplacian(y) + spec.mass_coefficient * u(y); }
};

/// Random triangle in space with angles bounded away from zero.
inline std::array<Vec3, 3> random_triangle(double scale = 1.0) {
  for (;;) {
    const Vec3 c{uniform(-2, 2), uniform(-2, 2), uniform(-2, 2)};
    std::array<Vec3, 3> x{c + scale * random_unit(), c + scale * random_unit(), c + scale * random_unit()};
    const Vec3 n = (x[1] - x[0]).cross(x[2] - x[0]);
    double min_angle = 180.0;
    for (int i = 0; i < 3; ++i) {
      const Vec3 a = x[(i + 1) % 3] - x[i], b = x[(i + 2) % 3] - x[i];
      min_angle = std::min(min_angle, std::acos(a.normalized().dot(b.normalized())) * 180.0 / std::numbers::pi);
    }
    if (n.norm() > 0.05 * scale * scale && min_angle > 10.0) return x;
  }
}

}  // namespace test
