#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "surfcr/errors.hpp"
#include "surfcr/level_surface.hpp"
#include "surfcr/quadrature.hpp"
#include "surfcr/surface_mesh.hpp"
#include "surfcr/tangential.hpp"

namespace surfcr {

// Crouzeix-Raviart basis. phi_i belongs to local edge i = (v_i, v_{i+1}) and
// equals 1 - 2 lambda_{i+2}, where v_{i+2} is the vertex opposite that edge.
namespace cr {

inline int opposite_vertex(int edge) { return (edge + 2) % 3; }

inline double basis(int i, const Vec3& bary) { return 1.0 - 2.0 * bary[opposite_vertex(i)]; }

inline Vec3 basis_gradient(const ElementFrame& f, int i) {
  return -2.0 * f.barycentric_gradients[opposite_vertex(i)];
}

/// Vector factor of local basis function 2i + a: n_{E_i} (a = 0) or tau_{E_i} (a = 1).
inline const Vec3& direction(const ElementFrame& f, int local) {
  const auto& e = f.edges[local / 2];
  return local % 2 == 0 ? e.conormal : e.tangent;
}

/// Barycentric coordinates of the point at parameter t in [0,1] along local edge i.
inline Vec3 edge_point(int i, double t) {
  Vec3 b = Vec3::Zero();
  b[i] = 1.0 - t;
  b[(i + 1) % 3] = t;
  return b;
}

}  // namespace cr

/// Two global DOFs per edge: 2e for the conormal and 2e+1 for the tangential
/// component. The element with the lower index holds the edge with sign +1,
/// its neighbour with sign -1, which is the midpoint continuity
///   v|K+ (m_E) . n+_E = -v|K- (m_E) . n-_E   (same for tau).
struct DofMap {
  std::vector<std::array<int, 3>> edge;     // global edge of local edge i
  std::vector<std::array<double, 3>> sign;  // +1 on the master side, -1 otherwise
  std::size_t num_dofs = 0;

  /// Local index 2i + a, a = 0 for n_E and a = 1 for tau_E.
  int dof(std::size_t element, int local) const { return 2 * edge[element][local / 2] + local % 2; }
  double local_sign(std::size_t element, int local) const { return sign[element][local / 2]; }
};

inline DofMap build_dof_map(const SurfaceMesh& mesh) {
  DofMap map;
  map.edge.resize(mesh.num_triangles());
  map.sign.resize(mesh.num_triangles());
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) map.edge[k] = mesh.element_edges(k);
  for (const auto& e : mesh.edges()) {
    const bool first_is_master = e.elements[0] < e.elements[1];
    map.sign[e.elements[0]][e.local[0]] = first_is_master ? 1.0 : -1.0;
    map.sign[e.elements[1]][e.local[1]] = first_is_master ? -1.0 : 1.0;
  }
  map.num_dofs = 2 * mesh.num_edges();
  return map;
}

/// Mesh, element frames and DOF numbering of the tangential CR space.
struct CRSpace {
  SurfaceMesh mesh;
  std::vector<ElementFrame> frames;
  DofMap dofs;

  explicit CRSpace(SurfaceMesh m) : mesh(std::move(m)), frames(compute_frames(mesh)), dofs(build_dof_map(mesh)) {}

  std::size_t num_dofs() const noexcept { return dofs.num_dofs; }
  std::size_t num_elements() const noexcept { return mesh.num_triangles(); }

  const Vec3& direction(std::size_t k, int local) const { return cr::direction(frames[k], local); }
};

/// Member of the global space. On element K:  v|K = sum_i (v_i^n n_{E_i} + v_i^t tau_{E_i}) phi_i,
/// with (v_i^n, v_i^t) = sign * global pair.
class DiscreteField {
 public:
  DiscreteField(std::shared_ptr<const CRSpace> space, Eigen::VectorXd coefficients)
      : space_(std::move(space)), coefficients_(std::move(coefficients)) {
    if (static_cast<std::size_t>(coefficients_.size()) != space_->num_dofs()) {
      throw IndexOutOfRange("coefficient vector does not match the number of DOFs");
    }
  }

  static DiscreteField zero(std::shared_ptr<const CRSpace> space) {
    const auto n = static_cast<Eigen::Index>(space->num_dofs());
    return {std::move(space), Eigen::VectorXd::Zero(n)};
  }

  const CRSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const CRSpace>& space_ptr() const noexcept { return space_; }
  const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  Eigen::VectorXd& coefficients() noexcept { return coefficients_; }

  /// (v_i^n, v_i^t) interleaved, i.e. index 2i + a.
  std::array<double, 6> local_coefficients(std::size_t k) const {
    check_element(k);
    std::array<double, 6> c{};
    for (int l = 0; l < 6; ++l) c[l] = space_->dofs.local_sign(k, l) * coefficients_[space_->dofs.dof(k, l)];
    return c;
  }

  Vec3 value(std::size_t k, const Vec3& bary) const {
    const auto c = local_coefficients(k);
    Vec3 v = Vec3::Zero();
    for (int l = 0; l < 6; ++l) v += c[l] * cr::basis(l / 2, bary) * space_->direction(k, l);
    return v;
  }

  /// Elementwise constant grad_{Gamma_h} v = P_h (grad v) P_h = sum c (grad phi)^T.
  Mat3 gradient(std::size_t k) const {
    const auto c = local_coefficients(k);
    Mat3 g = Mat3::Zero();
    for (int l = 0; l < 6; ++l) {
      g += c[l] * space_->direction(k, l) * cr::basis_gradient(space_->frames[k], l / 2).transpose();
    }
    return g;
  }

 private:
  void check_element(std::size_t k) const {
    if (k >= space_->num_elements()) throw IndexOutOfRange("element index " + std::to_string(k) + " out of range");
  }

  std::shared_ptr<const CRSpace> space_;
  Eigen::VectorXd coefficients_;
};

struct FieldSample {
  Vec3 value;
  Mat3 gradient;
};

inline FieldSample evaluate(const DiscreteField& field, std::size_t element, const Vec3& bary) {
  if (element >= field.space().num_elements()) throw IndexOutOfRange("element index out of range");
  if ((bary.array() < -1e-12).any() || std::abs(bary.sum() - 1.0) > 1e-12) {
    throw IndexOutOfRange("barycentric point outside the element");
  }
  return {field.value(element, bary), field.gradient(element)};
}

namespace detail {

constexpr int kEdgeQuadraturePoints = 5;

inline void require_finite(const Vec3& v) {
  if (!v.allFinite()) throw QuadratureFailure("non-finite integrand in edge quadrature");
}

}  // namespace detail

/// Tangential interpolant: on each edge, the means of the lifted conormal and
/// tangential components of u~ become the coefficients along n_E and tau_E.
/// Both neighbours would produce the same global value up to sign, so each
/// edge is evaluated once from its master element.
inline DiscreteField interpolate_tan(const TangentialFieldSpec& spec, std::shared_ptr<const CRSpace> space) {
  static const LineRule line = gauss_legendre(detail::kEdgeQuadraturePoints);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space->num_dofs()));
  const auto& mesh = space->mesh;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const int side = space->dofs.sign[edge.elements[0]][edge.local[0]] > 0 ? 0 : 1;
    const auto k = static_cast<std::size_t>(edge.elements[side]);
    const int i = edge.local[side];
    const auto& frame = space->frames[k];
    double normal_mean = 0.0, tangent_mean = 0.0;
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const Vec3 x = frame.point(cr::edge_point(i, line.points[q]));
      const auto lifted = lifted_edge_frame(spec.surface, x, frame.edges[i].tangent);
      const Vec3 u = exact_solution(spec, lifted.lifted.position);
      detail::require_finite(u);
      normal_mean += line.weights[q] * u.dot(lifted.conormal);
      tangent_mean += line.weights[q] * u.dot(lifted.tangent);
    }
    coeffs[2 * static_cast<Eigen::Index>(e)] = normal_mean;
    coeffs[2 * static_cast<Eigen::Index>(e) + 1] = tangent_mean;
  }
  return {std::move(space), std::move(coeffs)};
}

/// Componentwise scalar CR interpolation of u~: alpha_i = mean of u~ over E_i.
/// Not tangential to the discrete surface, hence stored per element.
struct ComponentwiseInterpolant {
  std::shared_ptr<const CRSpace> space;
  std::vector<std::array<Vec3, 3>> alpha;

  Vec3 value(std::size_t k, const Vec3& bary) const {
    Vec3 v = Vec3::Zero();
    for (int i = 0; i < 3; ++i) v += cr::basis(i, bary) * alpha[k][i];
    return v;
  }

  /// Full ambient gradient sum alpha_i (grad phi_i)^T; project with P_h as needed.
  Mat3 gradient(std::size_t k) const {
    Mat3 g = Mat3::Zero();
    for (int i = 0; i < 3; ++i) g += alpha[k][i] * cr::basis_gradient(space->frames[k], i).transpose();
    return g;
  }
};

template <class Field>
ComponentwiseInterpolant interpolate_componentwise(const Field& u, const LevelSurface& surface,
                                                   std::shared_ptr<const CRSpace> space) {
  static const LineRule line = gauss_legendre(detail::kEdgeQuadraturePoints);
  ComponentwiseInterpolant out{space, std::vector<std::array<Vec3, 3>>(space->num_elements())};
  for (std::size_t k = 0; k < space->num_elements(); ++k) {
    const auto& frame = space->frames[k];
    for (int i = 0; i < 3; ++i) {
      Vec3 mean = Vec3::Zero();
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const Vec3 x = frame.point(cr::edge_point(i, line.points[q]));
        const Vec3 value = u(surface.closest_point(x).position);
        detail::require_finite(value);
        mean += line.weights[q] * value;
      }
      out.alpha[k][i] = mean;
    }
  }
  return out;
}

inline ComponentwiseInterpolant interpolate_componentwise(const TangentialFieldSpec& spec,
                                                          std::shared_ptr<const CRSpace> space) {
  return interpolate_componentwise([&](const Vec3& y) { return exact_solution(spec, y); }, spec.surface,
                                   std::move(space));
}

/// Integrated conormal and tangential jumps across each edge,
///   int_E (v+ . n+_E + v- . n-_E)   and   int_E (v+ . tau+_E + v- . tau-_E),
/// which vanish for members of the global space.
inline std::vector<std::array<double, 2>> edge_jump_means(const DiscreteField& field) {
  static const LineRule line = gauss_legendre(2);  // integrands are linear along the edge
  const CRSpace& space = field.space();
  std::vector<std::array<double, 2>> out(space.mesh.num_edges());
  for (std::size_t e = 0; e < space.mesh.num_edges(); ++e) {
    const Edge& edge = space.mesh.edges()[e];
    std::array<double, 2> jump{0.0, 0.0};
    for (int side = 0; side < 2; ++side) {
      const auto k = static_cast<std::size_t>(edge.elements[side]);
      const int i = edge.local[side];
      const auto& ef = space.frames[k].edges[i];
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        // The neighbour runs along the edge in the opposite direction.
        const double t = side == 0 ? line.points[q] : 1.0 - line.points[q];
        const Vec3 v = field.value(k, cr::edge_point(i, t));
        jump[0] += line.weights[q] * ef.length * v.dot(ef.conormal);
        jump[1] += line.weights[q] * ef.length * v.dot(ef.tangent);
      }
    }
    out[e] = jump;
  }
  return out;
}

}  // namespace surfcr
