#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "support.hpp"

using surfcr::LevelSurface;
using surfcr::SurfaceMesh;
using surfcr::Vec3;

namespace {

const LevelSurface kSphere = LevelSurface::sphere();
const LevelSurface kTorus = LevelSurface::torus();

void expect_outward(const SurfaceMesh& mesh, const LevelSurface& s) {
  for (const auto& f : surfcr::compute_frames(mesh)) {
    ASSERT_GT(f.normal.dot(s.unit_normal(f.centroid())), 0.0);
  }
}

}  // namespace

TEST(SphereMesh, IcosahedronCounts) {
  const auto m = surfcr::build_sphere_mesh(0);
  EXPECT_EQ(m.num_vertices(), 12u);
  EXPECT_EQ(m.num_triangles(), 20u);
  EXPECT_EQ(m.num_edges(), 30u);
}

TEST(SphereMesh, CountsFollowRefinementRecurrence) {
  std::size_t v = 12, e = 30, f = 20;
  for (int level = 0; level <= 4; ++level) {
    const auto m = surfcr::build_sphere_mesh(level);
    EXPECT_EQ(m.num_vertices(), v);
    EXPECT_EQ(m.num_edges(), e);
    EXPECT_EQ(m.num_triangles(), f);
    EXPECT_EQ(m.euler_characteristic(), 2);
    std::tie(v, e, f) = std::make_tuple(v + e, 2 * e + 3 * f, 4 * f);
  }
  const auto m3 = surfcr::build_sphere_mesh(3);
  EXPECT_EQ(m3.num_vertices(), 642u);
  EXPECT_EQ(m3.num_triangles(), 1280u);
  EXPECT_EQ(m3.num_edges(), 1920u);
}

TEST(SphereMesh, QualityOnAllStudyLevels) {
  double previous_h = 0.0;
  for (int level = 0; level <= 6; ++level) {
    const auto m = surfcr::build_sphere_mesh(level);
    EXPECT_LT(m.max_level_set_residual(kSphere), 1e-10);
    EXPECT_GT(m.min_angle_degrees(), 20.0);
    expect_outward(m, kSphere);
    const double h = m.mesh_size();
    if (level >= 3) {
      EXPECT_NEAR(h / previous_h, 0.5, 0.025) << "level " << level;
    }
    previous_h = h;
  }
}

TEST(TorusMesh, SmallestGrid) {
  const auto m = surfcr::build_torus_mesh(8, 4);
  EXPECT_EQ(m.num_vertices(), 32u);
  EXPECT_EQ(m.num_triangles(), 64u);
  EXPECT_EQ(m.num_edges(), 96u);
  EXPECT_EQ(m.euler_characteristic(), 0);
}

TEST(TorusMesh, QualityOnAllStudyLevels) {
  double previous_h = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const auto m = surfcr::build_torus_mesh(16 << k, 8 << k);
    EXPECT_EQ(m.euler_characteristic(), 0);
    EXPECT_LT(m.max_level_set_residual(kTorus), 1e-12);
    EXPECT_GT(m.min_angle_degrees(), 20.0);
    expect_outward(m, kTorus);
    if (k > 0) {
      EXPECT_NEAR(m.mesh_size() / previous_h, 0.5, 0.05);
    }
    previous_h = m.mesh_size();
  }
}

TEST(TorusMesh, InvalidResolution) {
  EXPECT_THROW(surfcr::build_torus_mesh(6, 4), surfcr::InvalidResolution);
  EXPECT_THROW(surfcr::build_torus_mesh(8, 3), surfcr::InvalidResolution);
  EXPECT_THROW(surfcr::build_sphere_mesh(9), surfcr::InvalidResolution);
  EXPECT_THROW(surfcr::build_sphere_mesh(1, kTorus), surfcr::InvalidResolution);
}

TEST(SurfaceMesh, RejectsInvalidConnectivity) {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  // Tetrahedron, consistently oriented.
  std::vector<surfcr::Triangle> good = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  EXPECT_NO_THROW(SurfaceMesh(v, good));
  auto flipped = good;
  std::swap(flipped[0][1], flipped[0][2]);
  EXPECT_THROW(SurfaceMesh(v, flipped), surfcr::InvalidMesh);
  EXPECT_THROW(SurfaceMesh(v, {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}}), surfcr::InvalidMesh);
  EXPECT_THROW(SurfaceMesh(v, {{0, 2, 1}, {0, 1, 4}, {1, 2, 3}, {0, 3, 2}}), surfcr::InvalidMesh);
  EXPECT_THROW(SurfaceMesh(v, {{0, 0, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}}), surfcr::InvalidMesh);
}

TEST(SurfaceMesh, EdgeNeighboursTraverseOppositely) {
  const std::vector<std::pair<SurfaceMesh, std::size_t>> cases = {
      {surfcr::build_sphere_mesh(2), 0},
      // Grid quads of a surface of revolution are planar trapezoids, so only
      // their diagonals have coplanar neighbours.
      {surfcr::build_torus_mesh(16, 8), 16 * 8}};
  for (const auto& [m, coplanar] : cases) {
    const auto frames = surfcr::compute_frames(m);
    std::size_t opposite = 0;
    for (const auto& e : m.edges()) {
      ASSERT_LT(e.elements[0], e.elements[1]);
      const auto& a = frames[e.elements[0]].edges[e.local[0]];
      const auto& b = frames[e.elements[1]].edges[e.local[1]];
      EXPECT_EQ(a.tangent, -b.tangent);
      EXPECT_LT((a.midpoint - b.midpoint).norm(), 1e-14);
      EXPECT_EQ(a.length, b.length);
      opposite += (a.conormal + b.conormal).norm() < 1e-12;
    }
    EXPECT_EQ(opposite, coplanar);
  }
}

TEST(ElementFrame, AxisAlignedTriangle) {
  const auto f = surfcr::compute_frame({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)});
  EXPECT_LT((f.normal - Vec3(0, 0, 1)).norm(), 1e-15);
  EXPECT_NEAR(f.area, std::sqrt(3.0) / 4, 1e-15);
  for (int i = 0; i < 3; ++i) {
    const auto& e = f.edges[i];
    EXPECT_NEAR(e.conormal.dot(e.tangent), 0.0, 1e-15);
    // Outward: away from the centroid.
    EXPECT_GT(e.conormal.dot(e.midpoint - f.centroid()), 0.0);
  }
  EXPECT_LT((f.edges[0].conormal - Vec3(0, -1, 0)).norm(), 1e-15);
}

TEST(ElementFrame, RandomTrianglesAreOrthonormal) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = test::random_triangle();
    const auto f = surfcr::compute_frame(x);
    EXPECT_LT((f.projector - (surfcr::Mat3::Identity() - f.normal * f.normal.transpose())).norm(), 1e-15);
    EXPECT_LT((f.normal - (x[1] - x[0]).cross(x[2] - x[0]).normalized()).norm(), 1e-14);
    for (const auto& e : f.edges) {
      EXPECT_NEAR(e.conormal.dot(e.tangent), 0.0, 1e-13);
      EXPECT_NEAR(e.conormal.dot(f.normal), 0.0, 1e-13);
      EXPECT_NEAR(e.conormal.norm(), 1.0, 1e-13);
      EXPECT_NEAR(e.tangent.cross(e.conormal).dot(f.normal), -1.0, 1e-13);
      EXPECT_NEAR(e.tangent.cross(f.normal).dot(e.conormal), 1.0, 1e-13);
      EXPECT_GT(e.conormal.dot(e.midpoint - f.centroid()), 0.0);
    }
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(f.barycentric_gradients[k].dot(x[j] - x[0]), (k == j) - (k == 0), 1e-12);
      }
    }
  }
}

TEST(ElementFrame, DegenerateTriangle) {
  EXPECT_THROW(surfcr::compute_frame({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)}), surfcr::DegenerateTriangle);
}

TEST(GeometryRates, PlanarPatchIsExact) {
  const auto plane = LevelSurface::level_set(surfcr::Expr::coordinate(2), 1.0);
  const auto s = surfcr::measure_element_geometry(plane, surfcr::compute_frame({Vec3(0, 0, 0), Vec3(1, 0.2, 0),
                                                                                Vec3(0.3, 0.9, 0)}));
  EXPECT_LT(s.projector, 1e-15);
  EXPECT_LT(s.conormal, 1e-15);
  EXPECT_LT(s.projected_conormal, 1e-15);
  EXPECT_LT(s.discrete_projected_conormal, 1e-15);
}

TEST(GeometryRates, SphereOrders) {
  std::vector<SurfaceMesh> meshes;
  for (int l = 2; l <= 5; ++l) meshes.push_back(surfcr::build_sphere_mesh(l));
  const auto r = surfcr::measure_geometry_rates(kSphere, meshes);
  EXPECT_FALSE(r.projector[0].has_value());
  EXPECT_NEAR(*r.projector.back(), 1.0, 0.15);
  EXPECT_NEAR(*r.conormal.back(), 1.0, 0.15);
  EXPECT_NEAR(*r.projected_conormal.back(), 2.0, 0.2);
  EXPECT_NEAR(*r.discrete_projected_conormal.back(), 2.0, 0.2);
  EXPECT_NEAR(*r.area.back(), 2.0, 0.1);
}

TEST(GeometryRates, TorusOrders) {
  std::vector<SurfaceMesh> meshes;
  for (int k = 0; k <= 3; ++k) meshes.push_back(surfcr::build_torus_mesh(16 << k, 8 << k));
  const auto r = surfcr::measure_geometry_rates(kTorus, meshes);
  EXPECT_NEAR(*r.projector.back(), 1.0, 0.15);
  EXPECT_NEAR(*r.discrete_projected_conormal.back(), 2.0, 0.2);
  EXPECT_NEAR(*r.area.back(), 2.0, 0.1);
}

TEST(GeometryRates, AreaAgreesWithRichardsonExtrapolation) {
  // Independent of the known value: extrapolate three levels assuming O(h^2).
  std::vector<double> a, h;
  for (int l = 3; l <= 5; ++l) {
    const auto m = surfcr::build_sphere_mesh(l);
    a.push_back(m.total_area());
    h.push_back(m.mesh_size());
  }
  const double r = h[1] / h[2];
  const double extrapolated = a[2] + (a[2] - a[1]) / (r * r - 1);
  EXPECT_NEAR(extrapolated, 4 * std::numbers::pi, 2e-4);
  EXPECT_LT(std::abs(extrapolated - 4 * std::numbers::pi), std::abs(a[2] - 4 * std::numbers::pi) / 10);
}

TEST(GeometryRates, InsufficientMeshes) {
  std::vector<SurfaceMesh> two = {surfcr::build_sphere_mesh(1), surfcr::build_sphere_mesh(2)};
  EXPECT_THROW(surfcr::measure_geometry_rates(kSphere, two), surfcr::InsufficientMeshes);
  std::vector<SurfaceMesh> unordered = {surfcr::build_sphere_mesh(2), surfcr::build_sphere_mesh(1),
                                        surfcr::build_sphere_mesh(3)};
  EXPECT_THROW(surfcr::measure_geometry_rates(kSphere, unordered), surfcr::InsufficientMeshes);
}

TEST(MeshIo, OffRoundTrip) {
  const auto m = surfcr::build_torus_mesh(8, 4);
  std::stringstream ss;
  surfcr::write_off(m, ss);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "OFF");
  std::string counts;
  std::getline(ss, counts);
  EXPECT_EQ(counts, "32 64 96");
  ss.seekg(0);
  const auto back = surfcr::read_off(ss);
  ASSERT_EQ(back.num_vertices(), m.num_vertices());
  EXPECT_EQ(back.triangles(), m.triangles());
  for (std::size_t i = 0; i < m.num_vertices(); ++i) EXPECT_EQ(back.vertices()[i], m.vertices()[i]);
}

TEST(MeshIo, FaceLinesAndComments) {
  std::stringstream ss("OFF\n# tetrahedron\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n");
  const auto m = surfcr::read_off(ss);
  EXPECT_EQ(m.num_edges(), 6u);
  std::stringstream out;
  surfcr::write_off(m, out);
  EXPECT_NE(out.str().find("\n3 0 2 1\n"), std::string::npos);
}

TEST(MeshIo, Errors) {
  std::stringstream no_header("4 4 6\n");
  EXPECT_THROW(surfcr::read_off(no_header), surfcr::IoError);
  std::stringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  EXPECT_THROW(surfcr::read_off(quad), surfcr::IoError);
  std::stringstream truncated("OFF\n4 4 6\n0 0 0\n");
  EXPECT_THROW(surfcr::read_off(truncated), surfcr::IoError);
  EXPECT_THROW(surfcr::read_off(std::filesystem::path("/nonexistent/mesh.off")), surfcr::IoError);
}
