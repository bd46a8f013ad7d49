#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "surfcr/errors.hpp"
#include "surfcr/jet.hpp"
#include "surfcr/level_surface.hpp"

namespace surfcr {

using Triangle = std::array<int, 3>;

/// Undirected edge with its two neighbours. elements[0] is the lower element
/// index; local[k] is the local edge number of the edge inside elements[k].
/// Local edge i of a triangle (v0, v1, v2) runs from v_i to v_{i+1}.
struct Edge {
  std::array<int, 2> vertices;
  std::array<int, 2> elements;
  std::array<int, 2> local;
};

/// Closed, consistently oriented triangulation.
class SurfaceMesh {
 public:
  SurfaceMesh() = default;

  /// Builds edge connectivity. Throws InvalidMesh unless every edge has exactly
  /// two neighbours that traverse it in opposite directions.
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
      : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    build_edges();
  }

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  /// Global edge index of local edge i of element k.
  int element_edge(std::size_t k, int i) const { return element_edges_[k][static_cast<std::size_t>(i)]; }
  const std::array<int, 3>& element_edges(std::size_t k) const { return element_edges_[k]; }

  Vec3 vertex(std::size_t k, int i) const { return vertices_[static_cast<std::size_t>(triangles_[k][i])]; }

  long euler_characteristic() const {
    return static_cast<long>(num_vertices()) - static_cast<long>(num_edges()) +
           static_cast<long>(num_triangles());
  }

  /// Maximal edge length (for triangles this is the diameter).
  double mesh_size() const {
    double h = 0.0;
    for (const auto& e : edges_) {
      h = std::max(h, (vertices_[e.vertices[1]] - vertices_[e.vertices[0]]).norm());
    }
    return h;
  }

  double min_angle_degrees() const {
    double m = 180.0;
    for (std::size_t k = 0; k < num_triangles(); ++k) {
      for (int i = 0; i < 3; ++i) {
        const Vec3 a = vertex(k, (i + 1) % 3) - vertex(k, i);
        const Vec3 b = vertex(k, (i + 2) % 3) - vertex(k, i);
        const double c = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
        m = std::min(m, std::acos(c) * 180.0 / std::numbers::pi);
      }
    }
    return m;
  }

  double total_area() const {
    double a = 0.0;
    for (std::size_t k = 0; k < num_triangles(); ++k) {
      a += 0.5 * (vertex(k, 1) - vertex(k, 0)).cross(vertex(k, 2) - vertex(k, 0)).norm();
    }
    return a;
  }

  /// max |phi(v)| over the vertices.
  double max_level_set_residual(const LevelSurface& s) const {
    double r = 0.0;
    for (const auto& v : vertices_) r = std::max(r, std::abs(s.phi(v)));
    return r;
  }

 private:
  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  void build_edges() {
    const int nv = static_cast<int>(vertices_.size());
    std::unordered_map<std::uint64_t, int> lookup;
    lookup.reserve(triangles_.size() * 2);
    element_edges_.assign(triangles_.size(), {-1, -1, -1});
    std::vector<std::array<int, 2>> first_dir;  // directed (from, to) of first visitor
    for (std::size_t k = 0; k < triangles_.size(); ++k) {
      const auto& t = triangles_[k];
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw InvalidMesh("triangle with repeated vertex");
      for (int i = 0; i < 3; ++i) {
        const int a = t[i], b = t[(i + 1) % 3];
        if (a < 0 || b < 0 || a >= nv || b >= nv) throw InvalidMesh("vertex index out of range");
        auto [it, inserted] = lookup.try_emplace(key(a, b), static_cast<int>(edges_.size()));
        if (inserted) {
          edges_.push_back({{a, b}, {static_cast<int>(k), -1}, {i, -1}});
          first_dir.push_back({a, b});
        } else {
          Edge& e = edges_[static_cast<std::size_t>(it->second)];
          if (e.elements[1] != -1) throw InvalidMesh("edge shared by more than two triangles");
          const auto& d = first_dir[static_cast<std::size_t>(it->second)];
          if (d[0] != b || d[1] != a) throw InvalidMesh("inconsistent triangle orientation");
          e.elements[1] = static_cast<int>(k);
          e.local[1] = i;
        }
        element_edges_[k][static_cast<std::size_t>(i)] = it->second;
      }
    }
    for (const auto& e : edges_) {
      if (e.elements[1] == -1) throw InvalidMesh("boundary edge in a closed-surface mesh");
    }
  }

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
};

/// Uniform 1-to-4 split; new vertices are edge midpoints moved onto the surface.
inline SurfaceMesh refine(const SurfaceMesh& mesh, const LevelSurface& surface) {
  std::vector<Vec3> vertices = mesh.vertices();
  const int nv = static_cast<int>(vertices.size());
  vertices.reserve(vertices.size() + mesh.num_edges());
  for (const auto& e : mesh.edges()) {
    const Vec3 mid = 0.5 * (mesh.vertices()[e.vertices[0]] + mesh.vertices()[e.vertices[1]]);
    vertices.push_back(surface.closest_point(mid).position);
  }
  std::vector<Triangle> triangles;
  triangles.reserve(4 * mesh.num_triangles());
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto& t = mesh.triangles()[k];
    const int m0 = nv + mesh.element_edge(k, 0);  // between t0, t1
    const int m1 = nv + mesh.element_edge(k, 1);  // between t1, t2
    const int m2 = nv + mesh.element_edge(k, 2);  // between t2, t0
    triangles.push_back({t[0], m0, m2});
    triangles.push_back({m0, t[1], m1});
    triangles.push_back({m2, m1, t[2]});
    triangles.push_back({m0, m1, m2});
  }
  return {std::move(vertices), std::move(triangles)};
}

/// Icosahedron projected to the sphere, refined `level` times.
inline SurfaceMesh build_sphere_mesh(int level, const LevelSurface& surface = LevelSurface::sphere()) {
  if (level < 0 || level > 8) throw InvalidResolution("sphere level must be in [0, 8]");
  const auto* sphere = std::get_if<Sphere>(&surface.kind());
  if (sphere == nullptr) throw InvalidResolution("build_sphere_mesh needs a sphere surface");
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> v = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                         {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  for (auto& x : v) x = sphere->radius * x.normalized();
  std::vector<Triangle> t = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  SurfaceMesh mesh(std::move(v), std::move(t));
  for (int l = 0; l < level; ++l) mesh = refine(mesh, surface);
  return mesh;
}

/// Structured (theta, psi) grid on the torus, each quad split along its
/// shorter diagonal.
inline SurfaceMesh build_torus_mesh(int n_major, int n_minor, const LevelSurface& surface = LevelSurface::torus()) {
  if (n_major < 8 || n_minor < 4) throw InvalidResolution("torus mesh needs n_major >= 8 and n_minor >= 4");
  const auto* torus = std::get_if<Torus>(&surface.kind());
  if (torus == nullptr) throw InvalidResolution("build_torus_mesh needs a torus surface");
  const double big = torus->major_radius, small = torus->minor_radius;
  std::vector<Vec3> v;
  v.reserve(static_cast<std::size_t>(n_major) * n_minor);
  for (int i = 0; i < n_major; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / n_major;
    for (int j = 0; j < n_minor; ++j) {
      const double psi = 2.0 * std::numbers::pi * j / n_minor;
      const double rho = big + small * std::cos(psi);
      v.emplace_back(rho * std::cos(theta), rho * std::sin(theta), small * std::sin(psi));
    }
  }
  auto id = [&](int i, int j) { return ((i + n_major) % n_major) * n_minor + (j + n_minor) % n_minor; };
  std::vector<Triangle> t;
  t.reserve(2 * v.size());
  for (int i = 0; i < n_major; ++i) {
    for (int j = 0; j < n_minor; ++j) {
      // counterclockwise seen from outside: theta first, then psi
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((v[a] - v[c]).norm() <= (v[b] - v[d]).norm()) {
        t.push_back({a, b, c});
        t.push_back({a, c, d});
      } else {
        t.push_back({a, b, d});
        t.push_back({b, c, d});
      }
    }
  }
  return {std::move(v), std::move(t)};
}

/// Per-edge part of an element frame.
struct EdgeFrame {
  Vec3 tangent;   // tau_E, from local vertex i to i+1
  Vec3 conormal;  // n_E = tau_E x n_h, pointing out of the element
  Vec3 midpoint;
  double length = 0.0;
};

struct ElementFrame {
  Vec3 normal;  // n_h
  Mat3 projector;
  std::array<EdgeFrame, 3> edges;
  std::array<Vec3, 3> vertices;
  std::array<Vec3, 3> barycentric_gradients;  // grad lambda_k, in the element plane
  double area = 0.0;

  Vec3 point(const Vec3& bary) const {
    return bary[0] * vertices[0] + bary[1] * vertices[1] + bary[2] * vertices[2];
  }
  Vec3 centroid() const { return (vertices[0] + vertices[1] + vertices[2]) / 3.0; }
};

inline ElementFrame compute_frame(const std::array<Vec3, 3>& x) {
  ElementFrame f;
  f.vertices = x;
  const Vec3 cross = (x[1] - x[0]).cross(x[2] - x[0]);
  f.area = 0.5 * cross.norm();
  if (!(f.area >= 1e-14)) throw DegenerateTriangle("triangle area below 1e-14");
  f.normal = cross.normalized();
  f.projector = tangential_projector(f.normal);
  for (int i = 0; i < 3; ++i) {
    const Vec3 e = x[(i + 1) % 3] - x[i];
    auto& ef = f.edges[i];
    ef.length = e.norm();
    ef.tangent = e / ef.length;
    ef.conormal = ef.tangent.cross(f.normal);
    ef.midpoint = 0.5 * (x[i] + x[(i + 1) % 3]);
  }
  for (int k = 0; k < 3; ++k) {
    const Vec3 opposite = x[(k + 2) % 3] - x[(k + 1) % 3];
    f.barycentric_gradients[k] = f.normal.cross(opposite) / (2.0 * f.area);
  }
  return f;
}

inline std::vector<ElementFrame> compute_frames(const SurfaceMesh& mesh) {
  std::vector<ElementFrame> frames;
  frames.reserve(mesh.num_triangles());
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    frames.push_back(compute_frame({mesh.vertex(k, 0), mesh.vertex(k, 1), mesh.vertex(k, 2)}));
  }
  return frames;
}

/// Tangent and conormal of the lifted (curved) edge at the lift of x:
/// tau_{E^l} = J_p(x) tau_E / |J_p(x) tau_E|,  n_{E^l} = tau_{E^l} x n(p(x)).
struct LiftedEdgeFrame {
  Vec3 tangent;
  Vec3 conormal;
  SurfacePoint lifted;
};

inline LiftedEdgeFrame lifted_edge_frame(const LevelSurface& surface, const Vec3& x, const Vec3& tangent) {
  LiftedEdgeFrame f;
  f.lifted = surface.closest_point(x);
  f.tangent = (surface.closest_point_jacobian(x) * tangent).normalized();
  f.conormal = f.tangent.cross(f.lifted.normal);
  return f;
}

}  // namespace surfcr
