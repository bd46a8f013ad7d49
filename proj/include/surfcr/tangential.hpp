#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "surfcr/errors.hpp"
#include "surfcr/expr.hpp"
#include "surfcr/jet.hpp"
#include "surfcr/level_surface.hpp"

namespace surfcr {

/// Exact tangential field u = P w on a surface, generated from an ambient
/// closed-form field w, together with the zero-order coefficient c of
///   -Delta_Gamma u + c u = f.
struct TangentialFieldSpec {
  VectorExpr ambient;
  LevelSurface surface;
  double mass_coefficient = 0.1;
  std::string id = "custom";
};

/// w = (sin(x2 x3), -sin(x1 x3), cos(x3^2)) on the unit sphere.
inline TangentialFieldSpec sphere_solution(double mass_coefficient = 0.1) {
  const Expr x1 = Expr::coordinate(0), x2 = Expr::coordinate(1), x3 = Expr::coordinate(2);
  return {{sin(x2 * x3), -sin(x1 * x3), cos(x3 * x3)}, LevelSurface::sphere(), mass_coefficient, "sphere_eq"};
}

/// w = (x2 + x3 x1, -x1 x3, x3^2) on the torus R = 1, r = 1/2.
inline TangentialFieldSpec torus_solution(double mass_coefficient = 0.1) {
  const Expr x1 = Expr::coordinate(0), x2 = Expr::coordinate(1), x3 = Expr::coordinate(2);
  return {{x2 + x3 * x1, -(x1 * x3), x3 * x3}, LevelSurface::torus(), mass_coefficient, "torus_eq"};
}

namespace detail {

constexpr double kOnSurfaceTolerance = 1e-10;

inline void require_on_surface(const LevelSurface& s, const Vec3& y) {
  const double phi = s.phi(y);
  if (!(std::abs(phi) < kOnSurfaceTolerance)) {
    throw NotOnSurface("point is not on the surface (phi = " + std::to_string(phi) + ")");
  }
}

/// Jets of the smooth extensions P(x) = I - n(x) n(x)^T and U(x) = P(x) w(x).
struct AmbientJets {
  std::array<std::array<Jet2, 3>, 3> projector;
  JetVec3 field;
};

inline AmbientJets ambient_jets(const TangentialFieldSpec& spec, const Vec3& y) {
  const JetVec3 x = seed(y);
  const JetVec3 n = spec.surface.normal_field(x);
  const JetVec3 w = eval(spec.ambient, x);
  AmbientJets out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.projector[i][j] = (i == j ? 1.0 : 0.0) - n[i] * n[j];
    }
  }
  for (int i = 0; i < 3; ++i) {
    out.field[i] = out.projector[i][0] * w[0] + out.projector[i][1] * w[1] + out.projector[i][2] * w[2];
  }
  return out;
}

inline Mat3 projector_value(const AmbientJets& a) {
  Mat3 p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p(i, j) = a.projector[i][j].value;
  return p;
}

}  // namespace detail

/// u(y) = P(y) w(y).
inline Vec3 exact_solution(const TangentialFieldSpec& spec, const Vec3& y) {
  detail::require_on_surface(spec.surface, y);
  const Vec3 n = spec.surface.unit_normal(y);
  return tangential_projector(n) * eval(spec.ambient, y);
}

/// Jacobian of the ambient extension U = P w at y. Since U agrees with u on
/// the surface, grad(u o p)(x) = ambient_jacobian(p(x)) * J_p(x).
inline Mat3 ambient_jacobian(const TangentialFieldSpec& spec, const Vec3& y) {
  return jacobian(detail::ambient_jets(spec, y).field);
}

/// Covariant derivative grad_Gamma u = P grad(U) P at a surface point.
inline Mat3 tangential_gradient(const TangentialFieldSpec& spec, const Vec3& y) {
  detail::require_on_surface(spec.surface, y);
  const auto a = detail::ambient_jets(spec, y);
  const Mat3 p = detail::projector_value(a);
  return p * jacobian(a.field) * p;
}

namespace detail {

// Row k of div:  sum_m [ (d_m A) P ]_{km}  with  A = P G P,  G = grad U.
inline Vec3 bochner_from_jets(const AmbientJets& a) {
  const Mat3 p = projector_value(a);
  const Mat3 g = jacobian(a.field);
  Vec3 div = Vec3::Zero();
  for (int m = 0; m < 3; ++m) {
    Mat3 dp, dg;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        dp(i, j) = a.projector[i][j].gradient[m];
        dg(i, j) = a.field[i].hessian(j, m);
      }
    }
    const Mat3 da = dp * g * p + p * dg * p + p * g * dp;
    div += (da * p).col(m);
  }
  return p * div;
}

}  // namespace detail

/// Bochner Laplacian P div_Gamma(grad_Gamma u), the divergence taken row by row.
inline Vec3 bochner_laplacian(const TangentialFieldSpec& spec, const Vec3& y) {
  detail::require_on_surface(spec.surface, y);
  return detail::bochner_from_jets(detail::ambient_jets(spec, y));
}

/// f = -Delta_Gamma u + c u.
inline Vec3 manufactured_rhs(const TangentialFieldSpec& spec, const Vec3& y) {
  detail::require_on_surface(spec.surface, y);
  const auto a = detail::ambient_jets(spec, y);
  return -detail::bochner_from_jets(a) + spec.mass_coefficient * values(a.field);
}

}  // namespace surfcr
