#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "surfcr/errors.hpp"
#include "surfcr/jet.hpp"

namespace surfcr {

/// Quadrature on the reference triangle in barycentric coordinates. Weights
/// are normalized to sum to one, so an integral over K is |K| * sum w_q f(x_q).
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const noexcept { return weights.size(); }
};

namespace detail {

inline void add_orbit_3(QuadratureRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

inline void add_orbit_6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const Vec3& p : {Vec3(a, b, c), Vec3(a, c, b), Vec3(b, a, c), Vec3(b, c, a), Vec3(c, a, b),
                        Vec3(c, b, a)}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

}  // namespace detail

/// Symmetric triangle rule exact for polynomials up to `degree` (max 6).
/// Degrees 4-6 are Dunavant's 6-, 7- and 12-point rules.
inline QuadratureRule triangle_rule(int degree) {
  QuadratureRule r;
  if (degree < 1) {
    throw QuadratureFailure("no triangle rule of degree " + std::to_string(degree));
  } else if (degree == 1) {
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(1.0);
    r.degree = 1;
  } else if (degree == 2) {
    // edge midpoints
    r.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    r.degree = 2;
  } else if (degree <= 4) {
    detail::add_orbit_3(r, 0.44594849091596488632, 0.22338158967801146570);
    detail::add_orbit_3(r, 0.091576213509770743460, 0.10995174365532186764);
    r.degree = 4;
  } else if (degree == 5) {
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(0.225);
    const double s15 = std::sqrt(15.0);
    detail::add_orbit_3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    detail::add_orbit_3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    r.degree = 5;
  } else if (degree == 6) {
    detail::add_orbit_3(r, 0.24928674517091042129, 0.11678627572637936603);
    detail::add_orbit_3(r, 0.063089014491502228340, 0.050844906370206816921);
    detail::add_orbit_6(r, 0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194);
    r.degree = 6;
  } else {
    throw QuadratureFailure("no triangle rule of degree " + std::to_string(degree));
  }
  return r;
}

/// Gauss-Legendre nodes and weights on [0, 1], weights summing to one.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

inline LineRule gauss_legendre(int n) {
  if (n < 1 || n > 64) throw QuadratureFailure("Gauss-Legendre order out of range");
  LineRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    auto legendre = [n](double t) {  // (P_n(t), P_n'(t))
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      return std::pair{p1, n * (t * p1 - p0) / (t * t - 1.0)};
    };
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    r.points[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace surfcr
