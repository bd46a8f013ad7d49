#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "surfcr/surfcr.hpp"

namespace test {

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle
/// {(s, t): s, t >= 0, s + t <= 1}, 4x4 points, exact to degree 6 and beyond.
struct ReferencePoint {
  double s, t, w;  // w sums to 1/2
};

inline std::vector<ReferencePoint> duffy_rule() {
  const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double wa = (18.0 + std::sqrt(30.0)) / 36.0, wb = (18.0 - std::sqrt(30.0)) / 36.0;
  const std::array<double, 4> x{-b, -a, a, b}, w{wb, wa, wa, wb};
  std::vector<ReferencePoint> out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double u = 0.5 * (1 + x[i]), v = 0.5 * (1 + x[j]);
      out.push_back({u, v * (1 - u), 0.25 * w[i] * w[j] * (1 - u)});
    }
  }
  return out;
}

/// Brute-force element matrices from the affine map x = x0 + B (s, t) of the
/// reference triangle, with CR functions 1 - 2 lambda_hat of the opposite vertex.
inline surfcr::LocalMatrices reference_oracle(const std::array<surfcr::Vec3, 3>& x) {
  Eigen::Matrix<double, 3, 2> B;
  B.col(0) = x[1] - x[0];
  B.col(1) = x[2] - x[0];
  const Eigen::Matrix2d G = B.transpose() * B;
  const double jac = std::sqrt(G.determinant());
  const Eigen::Matrix<double, 3, 2> pinv = B * G.inverse();
  // Reference barycentrics (1 - s - t, s, t) and their reference gradients.
  const std::array<Eigen::Vector2d, 3> dlam{Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  const surfcr::Vec3 normal = B.col(0).cross(B.col(1)).normalized();
  std::array<surfcr::Vec3, 6> dir;
  for (int i = 0; i < 3; ++i) {
    const surfcr::Vec3 tau = (x[(i + 1) % 3] - x[i]).normalized();
    dir[2 * i] = tau.cross(normal);
    dir[2 * i + 1] = tau;
  }
  auto phi = [](int i, double s, double t) {
    const std::array<double, 3> lam{1 - s - t, s, t};
    return 1 - 2 * lam[(i + 2) % 3];
  };
  auto grad = [&](int i) -> surfcr::Vec3 { return pinv * (-2.0 * dlam[(i + 2) % 3]); };

  surfcr::LocalMatrices m{surfcr::LocalMatrix::Zero(), surfcr::LocalMatrix::Zero()};
  for (const auto& q : duffy_rule()) {
    for (int l = 0; l < 6; ++l) {
      for (int k = 0; k < 6; ++k) {
        const double cc = dir[l].dot(dir[k]);
        m.stiffness(l, k) += q.w * jac * cc * grad(l / 2).dot(grad(k / 2));
        m.mass(l, k) += q.w * jac * cc * phi(l / 2, q.s, q.t) * phi(k / 2, q.s, q.t);
      }
    }
  }
  return m;
}

}  // namespace test
