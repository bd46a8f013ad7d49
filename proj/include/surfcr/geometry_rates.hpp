#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "surfcr/convergence.hpp"
#include "surfcr/errors.hpp"
#include "surfcr/level_surface.hpp"
#include "surfcr/quadrature.hpp"
#include "surfcr/surface_mesh.hpp"

namespace surfcr {

/// Sup-norm samples of the discrete-vs-exact geometry on one mesh. Matrix
/// differences are measured in the Frobenius norm.
struct GeometrySample {
  double h = 0.0;
  double projector = 0.0;                    // |P - P_h|
  double conormal = 0.0;                     // |n_{E^l} - n_E|
  double projected_conormal = 0.0;           // |n_{E^l} - P n_E|
  double discrete_projected_conormal = 0.0;  // |P_h n_{E^l} - n_E|
  double area = 0.0;                         // sum |K|

  GeometrySample& merge(const GeometrySample& o) {
    projector = std::max(projector, o.projector);
    conormal = std::max(conormal, o.conormal);
    projected_conormal = std::max(projected_conormal, o.projected_conormal);
    discrete_projected_conormal = std::max(discrete_projected_conormal, o.discrete_projected_conormal);
    area += o.area;
    return *this;
  }
};

/// Samples one element: 7 interior points for the projector, 5 Gauss points
/// on each edge for the conormal quantities.
inline GeometrySample measure_element_geometry(const LevelSurface& surface, const ElementFrame& frame) {
  static const QuadratureRule interior = triangle_rule(5);
  static const LineRule along_edge = gauss_legendre(5);
  GeometrySample s;
  s.area = frame.area;
  for (const auto& b : interior.points) {
    const SurfacePoint sp = surface.closest_point(frame.point(b));
    s.projector = std::max(s.projector, (sp.projector - frame.projector).norm());
  }
  for (int i = 0; i < 3; ++i) {
    const auto& e = frame.edges[i];
    for (double t : along_edge.points) {
      const Vec3 x = (1.0 - t) * frame.vertices[i] + t * frame.vertices[(i + 1) % 3];
      const auto lifted = lifted_edge_frame(surface, x, e.tangent);
      s.conormal = std::max(s.conormal, (lifted.conormal - e.conormal).norm());
      s.projected_conormal =
          std::max(s.projected_conormal, (lifted.conormal - lifted.lifted.projector * e.conormal).norm());
      s.discrete_projected_conormal =
          std::max(s.discrete_projected_conormal, (frame.projector * lifted.conormal - e.conormal).norm());
    }
  }
  return s;
}

inline GeometrySample measure_geometry(const LevelSurface& surface, const SurfaceMesh& mesh) {
  GeometrySample total;
  total.h = mesh.mesh_size();
  for (const auto& f : compute_frames(mesh)) total.merge(measure_element_geometry(surface, f));
  return total;
}

struct GeometryRates {
  std::vector<GeometrySample> samples;
  std::vector<std::optional<double>> projector;
  std::vector<std::optional<double>> conormal;
  std::vector<std::optional<double>> projected_conormal;
  std::vector<std::optional<double>> discrete_projected_conormal;
  std::vector<std::optional<double>> area;  // order of |sum|K| - |Gamma||, when |Gamma| is known
};

inline GeometryRates measure_geometry_rates(const LevelSurface& surface, std::span<const SurfaceMesh> meshes) {
  if (meshes.size() < 3) throw InsufficientMeshes("geometry rates need at least three meshes");
  GeometryRates r;
  for (const auto& m : meshes) r.samples.push_back(measure_geometry(surface, m));
  for (std::size_t k = 1; k < r.samples.size(); ++k) {
    if (!(r.samples[k].h < r.samples[k - 1].h)) throw InsufficientMeshes("mesh sizes must strictly decrease");
  }
  auto column = [&](auto member) {
    std::vector<double> e, h;
    for (const auto& s : r.samples) {
      e.push_back(member(s));
      h.push_back(s.h);
    }
    return observed_orders(e, h);
  };
  r.projector = column([](const GeometrySample& s) { return s.projector; });
  r.conormal = column([](const GeometrySample& s) { return s.conormal; });
  r.projected_conormal = column([](const GeometrySample& s) { return s.projected_conormal; });
  r.discrete_projected_conormal = column([](const GeometrySample& s) { return s.discrete_projected_conormal; });
  if (const auto exact = surface.area()) {
    r.area = column([&](const GeometrySample& s) { return std::abs(s.area - *exact); });
  }
  return r;
}

}  // namespace surfcr
