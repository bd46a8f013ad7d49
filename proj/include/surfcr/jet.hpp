#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "surfcr/errors.hpp"

namespace surfcr {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Second-order truncated Taylor expansion of a scalar function of three
/// variables: value, gradient and (symmetric) Hessian at one point.
struct Jet2 {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  Mat3 hessian = Mat3::Zero();

  Jet2() = default;
  Jet2(double v) : value(v) {}  // NOLINT: implicit constants are intended
  Jet2(double v, const Vec3& g, const Mat3& h) : value(v), gradient(g), hessian(h) {}

  /// The coordinate function x_axis seeded at `at`.
  static Jet2 variable(int axis, double at) {
    Jet2 j(at);
    j.gradient[axis] = 1.0;
    return j;
  }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    gradient += o.gradient;
    hessian += o.hessian;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    value -= o.value;
    gradient -= o.gradient;
    hessian -= o.hessian;
    return *this;
  }
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
};

using JetVec3 = std::array<Jet2, 3>;

inline JetVec3 seed(const Vec3& x) {
  return {Jet2::variable(0, x[0]), Jet2::variable(1, x[1]), Jet2::variable(2, x[2])};
}

namespace detail {

inline Mat3 symmetrized(const Mat3& m) { return 0.5 * (m + m.transpose()); }

// f(a) given f(a.value), f', f''.
inline Jet2 compose(const Jet2& a, double f, double df, double d2f) {
  return Jet2(f, df * a.gradient,
              symmetrized(df * a.hessian + d2f * a.gradient * a.gradient.transpose()));
}

constexpr double kDivisionFloor = 1e-300;

}  // namespace detail

inline Jet2 operator-(const Jet2& a) { return Jet2(-a.value, -a.gradient, -a.hessian); }
inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  const Mat3 cross = a.gradient * b.gradient.transpose();
  return Jet2(a.value * b.value, a.value * b.gradient + b.value * a.gradient,
              detail::symmetrized(a.value * b.hessian + b.value * a.hessian + cross +
                                  cross.transpose()));
}

inline Jet2 operator*(double s, const Jet2& a) {
  return Jet2(s * a.value, s * a.gradient, s * a.hessian);
}
inline Jet2 operator*(const Jet2& a, double s) { return s * a; }
inline Jet2 operator+(Jet2 a, double s) {
  a.value += s;
  return a;
}
inline Jet2 operator+(double s, Jet2 a) { return a + s; }
inline Jet2 operator-(Jet2 a, double s) {
  a.value -= s;
  return a;
}
inline Jet2 operator-(double s, const Jet2& a) { return -a + s; }

inline Jet2 inverse(const Jet2& a) {
  if (std::abs(a.value) < detail::kDivisionFloor) throw DomainError("jet: division by zero");
  const double r = 1.0 / a.value;
  return detail::compose(a, r, -r * r, 2.0 * r * r * r);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(const Jet2& a, double s) {
  if (std::abs(s) < detail::kDivisionFloor) throw DomainError("jet: division by zero");
  return (1.0 / s) * a;
}

inline Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
inline Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return detail::compose(a, s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return detail::compose(a, c, -s, -c);
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return detail::compose(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
  if (!(a.value > 0.0)) throw DomainError("jet: log of non-positive value");
  const double r = 1.0 / a.value;
  return detail::compose(a, std::log(a.value), r, -r * r);
}

inline Jet2 sqrt(const Jet2& a) {
  // The derivative blows up at zero, so zero is outside the domain too.
  if (!(a.value > 0.0)) throw DomainError("jet: sqrt of non-positive value");
  const double s = std::sqrt(a.value);
  return detail::compose(a, s, 0.5 / s, -0.25 / (s * a.value));
}

inline Jet2 pow(const Jet2& a, int n) {
  if (n == 0) return Jet2(1.0);
  if (n < 0) return inverse(pow(a, -n));
  const double v = a.value;
  const double f = std::pow(v, n);
  const double df = n * std::pow(v, n - 1);
  const double d2f = n > 1 ? n * (n - 1) * std::pow(v, n - 2) : 0.0;
  return detail::compose(a, f, df, d2f);
}

inline Jet2 pow(const Jet2& a, double p) {
  if (!(a.value > 0.0)) throw DomainError("jet: real power of non-positive value");
  const double v = a.value;
  return detail::compose(a, std::pow(v, p), p * std::pow(v, p - 1.0),
                         p * (p - 1.0) * std::pow(v, p - 2.0));
}

/// Jacobian (rows = components) of a jet-valued vector field.
inline Mat3 jacobian(const JetVec3& f) {
  Mat3 j;
  for (int i = 0; i < 3; ++i) j.row(i) = f[i].gradient.transpose();
  return j;
}

inline Vec3 values(const JetVec3& f) { return {f[0].value, f[1].value, f[2].value}; }

}  // namespace surfcr
