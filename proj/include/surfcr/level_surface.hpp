#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "surfcr/errors.hpp"
#include "surfcr/expr.hpp"
#include "surfcr/jet.hpp"

namespace surfcr {

/// A point on the surface together with its normal and tangential projector.
struct SurfacePoint {
  Vec3 position;
  Vec3 normal;
  Mat3 projector;
};

inline Mat3 tangential_projector(const Vec3& n) { return Mat3::Identity() - n * n.transpose(); }

struct Sphere {
  double radius = 1.0;
};

/// Ring torus around the x3 axis: distance `major_radius` from the axis to
/// the centerline circle, tube radius `minor_radius`.
struct Torus {
  double major_radius = 1.0;
  double minor_radius = 0.5;
};

/// Zero level set of a closed-form function. Closest points are found by a
/// Newton iteration on the Lagrange system.
struct GenericLevelSet {
  Expr phi;
  VectorExpr grad_phi;

  explicit GenericLevelSet(Expr f)
      : phi(std::move(f)), grad_phi{phi.derivative(0), phi.derivative(1), phi.derivative(2)} {}
};

/// Closed surface given implicitly as {phi = 0}, with phi < 0 inside.
///
/// All queries are valid in the tube |d(x)| <= delta around the surface and
/// throw OutOfTube elsewhere.
class LevelSurface {
 public:
  using Kind = std::variant<Sphere, Torus, GenericLevelSet>;

  static constexpr double kNewtonTolerance = 1e-13;
  static constexpr int kNewtonMaxIterations = 50;

  LevelSurface(Kind kind, double delta) : kind_(std::move(kind)), delta_(delta) {}

  static LevelSurface sphere(double radius = 1.0) { return {Sphere{radius}, 0.5 * radius}; }
  static LevelSurface torus(double major_radius = 1.0, double minor_radius = 0.5) {
    return {Torus{major_radius, minor_radius}, 0.4 * minor_radius};
  }
  static LevelSurface level_set(Expr phi, double delta) { return {GenericLevelSet(std::move(phi)), delta}; }

  const Kind& kind() const noexcept { return kind_; }
  double delta() const noexcept { return delta_; }
  bool is_sphere() const noexcept { return std::holds_alternative<Sphere>(kind_); }
  bool is_torus() const noexcept { return std::holds_alternative<Torus>(kind_); }

  std::string name() const {
    if (is_sphere()) return "sphere";
    if (is_torus()) return "torus";
    return "level_set";
  }

  /// Exact surface area when known in closed form.
  std::optional<double> area() const {
    using std::numbers::pi;
    if (auto* s = std::get_if<Sphere>(&kind_)) return 4.0 * pi * s->radius * s->radius;
    if (auto* t = std::get_if<Torus>(&kind_)) return 4.0 * pi * pi * t->major_radius * t->minor_radius;
    return std::nullopt;
  }

  std::optional<int> genus() const {
    if (is_sphere()) return 0;
    if (is_torus()) return 1;
    return std::nullopt;
  }

  /// The defining level-set function, generic over double and Jet2.
  template <class T>
  T phi(const std::array<T, 3>& x) const {
    using std::sqrt;
    if (auto* s = std::get_if<Sphere>(&kind_)) {
      return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - s->radius * s->radius;
    }
    if (auto* t = std::get_if<Torus>(&kind_)) {
      const T rho_off = sqrt(x[0] * x[0] + x[1] * x[1]) - t->major_radius;
      return -(t->minor_radius * t->minor_radius - x[2] * x[2] - rho_off * rho_off);
    }
    return std::get<GenericLevelSet>(kind_).phi.eval(x);
  }

  double phi(const Vec3& x) const { return phi(std::array<double, 3>{x[0], x[1], x[2]}); }

  double signed_distance(const Vec3& x) const {
    if (auto* s = std::get_if<Sphere>(&kind_)) return checked_distance(x.norm() - s->radius);
    if (auto* t = std::get_if<Torus>(&kind_)) return torus_geometry(*t, x).distance;
    return generic_projection(x).distance;
  }

  /// n(x) = grad d(x); constant along normal rays.
  Vec3 unit_normal(const Vec3& x) const {
    if (auto* s = std::get_if<Sphere>(&kind_)) {
      checked_distance(x.norm() - s->radius);
      return x.normalized();
    }
    if (auto* t = std::get_if<Torus>(&kind_)) return torus_geometry(*t, x).normal;
    return generic_projection(x).normal;
  }

  SurfacePoint closest_point(const Vec3& x) const {
    Vec3 p, n;
    if (auto* s = std::get_if<Sphere>(&kind_)) {
      checked_distance(x.norm() - s->radius);
      n = x.normalized();
      p = s->radius * n;
    } else if (auto* t = std::get_if<Torus>(&kind_)) {
      const auto g = torus_geometry(*t, x);
      p = g.closest;
      n = g.normal;
    } else {
      const auto g = generic_projection(x);
      p = g.closest;
      n = g.normal;
    }
    return {p, n, tangential_projector(n)};
  }

  /// Jacobian of the closest-point map; n(p(x))^T J = 0 and J n(p(x)) = 0.
  Mat3 closest_point_jacobian(const Vec3& x) const {
    if (auto* s = std::get_if<Sphere>(&kind_)) {
      const double r = x.norm();
      checked_distance(r - s->radius);
      const Vec3 n = x / r;
      return (s->radius / r) * tangential_projector(n);
    }
    if (auto* t = std::get_if<Torus>(&kind_)) {
      const auto g = torus_geometry(*t, x);
      const Mat3 dq = Mat3::Identity() - g.centerline_jacobian;
      const Mat3 dn = tangential_projector(g.normal) * dq / g.tube_distance;
      return g.centerline_jacobian + t->minor_radius * dn;
    }
    // p(x) = P (I + d W)^-1 P with the Weingarten map W = P Hess(phi) P / |grad phi|.
    const auto g = generic_projection(x);
    const Jet2 j = std::get<GenericLevelSet>(kind_).phi.jet(g.closest);
    const Mat3 proj = tangential_projector(g.normal);
    const Mat3 weingarten = proj * j.hessian * proj / j.gradient.norm();
    const Mat3 m = Mat3::Identity() + g.distance * weingarten + g.normal * g.normal.transpose();
    return m.inverse() * proj;
  }

  /// Smooth extension of the unit normal off the surface (equal to n on the
  /// surface), evaluated generically so jets can be pushed through it.
  template <class T>
  std::array<T, 3> normal_field(const std::array<T, 3>& x) const {
    using std::sqrt;
    if (std::holds_alternative<Sphere>(kind_)) {
      const T norm = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      return {x[0] / norm, x[1] / norm, x[2] / norm};
    }
    if (auto* t = std::get_if<Torus>(&kind_)) {
      const T rho = sqrt(x[0] * x[0] + x[1] * x[1]);
      const T scale = 1.0 - t->major_radius / rho;
      const std::array<T, 3> q{x[0] * scale, x[1] * scale, x[2]};
      const T norm = sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
      return {q[0] / norm, q[1] / norm, q[2] / norm};
    }
    const auto& g = std::get<GenericLevelSet>(kind_).grad_phi;
    const std::array<T, 3> grad{g[0].eval(x), g[1].eval(x), g[2].eval(x)};
    const T norm = sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
    return {grad[0] / norm, grad[1] / norm, grad[2] / norm};
  }

  /// u~(x) = u(p(x)) for any callable u on surface points.
  template <class Field>
  auto extend(const Field& u, const Vec3& x) const {
    return u(closest_point(x).position);
  }

 private:
  struct TorusGeometry {
    Vec3 closest;
    Vec3 normal;
    double distance;
    double tube_distance;
    Mat3 centerline_jacobian;
  };

  struct Projection {
    Vec3 closest;
    Vec3 normal;
    double distance;
  };

  double checked_distance(double d) const {
    if (!(std::abs(d) <= delta_)) {
      throw OutOfTube("point at distance " + std::to_string(d) + " outside tube of half-width " +
                      std::to_string(delta_));
    }
    return d;
  }

  // Project to the centerline circle in the x1x2-plane, then onto the tube circle.
  TorusGeometry torus_geometry(const Torus& t, const Vec3& x) const {
    const double rho = std::hypot(x[0], x[1]);
    if (rho < 1e-300) throw OutOfTube("point on the torus axis");
    const Vec3 radial(x[0] / rho, x[1] / rho, 0.0);
    const Vec3 center = t.major_radius * radial;
    const Vec3 q = x - center;
    const double s = q.norm();
    checked_distance(s - t.minor_radius);
    const Vec3 n = q / s;
    Mat3 planar = Mat3::Zero();
    planar(0, 0) = planar(1, 1) = 1.0;
    const Mat3 dc = (t.major_radius / rho) * (planar - radial * radial.transpose());
    return {center + t.minor_radius * n, n, s - t.minor_radius, s, dc};
  }

  // Newton on  y - x + lambda grad phi(y) = 0,  phi(y) = 0.
  Projection generic_projection(const Vec3& x) const {
    const auto& level = std::get<GenericLevelSet>(kind_);
    Jet2 j = level.phi.jet(x);
    if (j.gradient.norm() < 1e-12) throw DegenerateGradient("level set gradient vanishes");
    double lambda = j.value / j.gradient.squaredNorm();
    Vec3 y = x - lambda * j.gradient;
    bool converged = false;
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
      j = level.phi.jet(y);
      Eigen::Vector4d residual;
      residual.head<3>() = y - x + lambda * j.gradient;
      residual[3] = j.value;
      if (residual.norm() < kNewtonTolerance) {
        converged = true;
        break;
      }
      Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
      jac.topLeftCorner<3, 3>() = Mat3::Identity() + lambda * j.hessian;
      jac.topRightCorner<3, 1>() = j.gradient;
      jac.bottomLeftCorner<1, 3>() = j.gradient.transpose();
      const Eigen::Vector4d step = jac.fullPivLu().solve(residual);
      if (!step.allFinite()) break;
      y -= step.head<3>();
      lambda -= step[3];
    }
    if (!converged) throw NewtonDivergence("closest-point Newton iteration did not converge");
    const double gnorm = j.gradient.norm();
    if (gnorm < 1e-12) throw DegenerateGradient("level set gradient vanishes on the surface");
    const Vec3 n = j.gradient / gnorm;
    const double d = (x - y).dot(n) >= 0.0 ? (x - y).norm() : -(x - y).norm();
    checked_distance(d);
    return {y, n, d};
  }

  Kind kind_;
  double delta_;
};

}  // namespace surfcr
