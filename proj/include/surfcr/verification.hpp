#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "surfcr/analysis.hpp"
#include "surfcr/convergence.hpp"
#include "surfcr/cr_space.hpp"
#include "surfcr/geometry_rates.hpp"
#include "surfcr/surface_mesh.hpp"

namespace surfcr {

/// One gated quantity: passes when lower <= value <= upper.
struct Check {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool passed() const { return std::isfinite(value) && value >= lower && value <= upper; }
};

inline std::ostream& operator<<(std::ostream& os, const Check& c) {
  return os << (c.passed() ? "PASS " : "FAIL ") << c.name << " = " << c.value << " in [" << c.lower << ", "
            << c.upper << "]";
}

inline bool all_passed(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.passed()) return false;
  }
  return true;
}

namespace detail {

inline double finest_order(const std::vector<std::optional<double>>& orders) {
  return orders.empty() || !orders.back() ? std::nan("") : *orders.back();
}

inline std::vector<SurfaceMesh> sphere_levels(int first, int last) {
  std::vector<SurfaceMesh> meshes;
  for (int l = first; l <= last; ++l) meshes.push_back(build_sphere_mesh(l));
  return meshes;
}

}  // namespace detail

/// Geometry rates on sphere levels 2..5.
inline std::vector<Check> verify_geometry() {
  const auto meshes = detail::sphere_levels(2, 5);
  const GeometryRates r = measure_geometry_rates(LevelSurface::sphere(), meshes);
  return {{"geometry: order of |P - P_h|", detail::finest_order(r.projector), 0.85, 1.15},
          {"geometry: order of |P_h n_lift - n_E|", detail::finest_order(r.discrete_projected_conormal), 1.8, 2.2},
          {"geometry: order of |n_lift - P n_E|", detail::finest_order(r.projected_conormal), 1.8, 2.2},
          {"geometry: order of area defect", detail::finest_order(r.area), 1.8, 2.2}};
}

/// Rates of the tangential interpolant of the sphere solution on levels 2..5.
inline std::vector<Check> verify_interpolation() {
  const TangentialFieldSpec spec = sphere_solution();
  std::vector<InterpolationErrors> e;
  for (int l = 2; l <= 5; ++l) {
    e.push_back(interpolation_errors(spec, std::make_shared<const CRSpace>(build_sphere_mesh(l))));
  }
  auto order = [&](double (*get)(const InterpolationErrors&)) {
    const std::size_t n = e.size();
    return eoc(get(e[n - 2]), get(e[n - 1]), e[n - 2].h, e[n - 1].h);
  };
  return {
      {"interpolation: order of |grad_h(u - Pi u)|", order([](const InterpolationErrors& x) { return x.norms.h1_seminorm; }), 0.85, 1.15},
      {"interpolation: order of |P(u - Pi u)|", order([](const InterpolationErrors& x) { return x.norms.l2_exact_projected; }), 1.8, 2.2},
      {"interpolation: order of |P_h(u - Pi u)|", order([](const InterpolationErrors& x) { return x.norms.l2_projected; }), 1.8, 2.2},
      {"interpolation: order of edge |P(u - Pi u)|", order([](const InterpolationErrors& x) { return x.edge_projected; }), 1.3, 1.7},
      {"interpolation: order of edge |P_h(u - Pi u)|", order([](const InterpolationErrors& x) { return x.edge_discrete_projected; }), 1.3, 1.7},
      {"interpolation: order of energy error", order([](const InterpolationErrors& x) { return x.norms.energy; }), 0.85, 1.15},
      {"interpolation: order of coefficient gap", order([](const InterpolationErrors& x) { return x.coefficient_gap; }), 0.85, 10.0},
  };
}

/// Random members of V_h: jump means and tangentiality.
inline std::vector<Check> verify_jumps(std::vector<SurfaceMesh> meshes, int fields_per_mesh = 100,
                                       unsigned seed = 20240611u) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double max_jump = 0.0, max_normal = 0.0;
  const QuadratureRule points = triangle_rule(5);
  for (SurfaceMesh& mesh : meshes) {
    auto space = std::make_shared<const CRSpace>(std::move(mesh));
    for (int f = 0; f < fields_per_mesh; ++f) {
      Eigen::VectorXd c(static_cast<Eigen::Index>(space->num_dofs()));
      for (auto& v : c) v = normal(rng);
      const DiscreteField field(space, c);
      for (const auto& j : edge_jump_means(field)) max_jump = std::max({max_jump, std::abs(j[0]), std::abs(j[1])});
      for (std::size_t k = 0; k < space->num_elements(); ++k) {
        for (const auto& b : points.points) {
          max_normal = std::max(max_normal, std::abs(field.value(k, b).dot(space->frames[k].normal)));
        }
      }
    }
  }
  return {{"jumps: max |int_E [v.n_E]|, |int_E [v.tau_E]|", max_jump, 0.0, 1e-12},
          {"jumps: max |v.n_h| at interior points", max_normal, 0.0, 1e-13}};
}

inline std::vector<Check> verify_jumps(int fields_per_mesh = 100, unsigned seed = 20240611u) {
  std::vector<SurfaceMesh> meshes;
  meshes.push_back(build_sphere_mesh(2));
  meshes.push_back(build_torus_mesh(16, 8));
  return verify_jumps(std::move(meshes), fields_per_mesh, seed);
}

}  // namespace surfcr
