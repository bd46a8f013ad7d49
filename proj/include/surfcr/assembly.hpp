#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "surfcr/cr_space.hpp"
#include "surfcr/errors.hpp"
#include "surfcr/quadrature.hpp"
#include "surfcr/sparse.hpp"
#include "surfcr/tangential.hpp"

namespace surfcr {

using LocalMatrix = Eigen::Matrix<double, 6, 6>;
using LocalVector = Eigen::Matrix<double, 6, 1>;

struct LocalMatrices {
  LocalMatrix stiffness;
  LocalMatrix mass;
};

/// Element matrices in the local basis c_l phi_{l/2}, c_l in {n_E, tau_E}.
///
/// grad_{Gamma_h}(c phi) = c (grad phi)^T because c and grad phi lie in the
/// element plane, so the stiffness is |K| (c_l . c_m)(grad phi_i . grad phi_j).
/// The mass uses the edge-midpoint rule, exact for the quadratic products:
/// (|K| / 3)(c_l . c_m) delta_ij.
inline LocalMatrices local_matrices(const ElementFrame& f) {
  if (!(f.area >= 1e-14)) throw DegenerateTriangle("local_matrices: degenerate element");
  std::array<Vec3, 3> grad;
  for (int i = 0; i < 3; ++i) grad[i] = cr::basis_gradient(f, i);
  LocalMatrices m;
  for (int l = 0; l < 6; ++l) {
    for (int k = 0; k < 6; ++k) {
      const int i = l / 2, j = k / 2;
      const double cc = cr::direction(f, l).dot(cr::direction(f, k));
      m.stiffness(l, k) = f.area * cc * grad[i].dot(grad[j]);
      m.mass(l, k) = i == j ? f.area / 3.0 * cc : 0.0;
    }
  }
  return m;
}

/// Sparsity pattern: the DOFs of edge e couple to the DOFs of every edge of
/// the two elements containing e (five edges, ten columns).
inline CsrMatrix make_pattern(const CRSpace& space) {
  const auto& mesh = space.mesh;
  std::vector<std::size_t> row_ptr{0};
  std::vector<int> cols;
  cols.reserve(10 * space.num_dofs());
  std::vector<int> neighbours;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    neighbours.clear();
    for (int k : mesh.edges()[e].elements) {
      for (int f : mesh.element_edges(static_cast<std::size_t>(k))) neighbours.push_back(f);
    }
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());
    for (int a = 0; a < 2; ++a) {
      for (int f : neighbours) {
        cols.push_back(2 * f);
        cols.push_back(2 * f + 1);
      }
      row_ptr.push_back(cols.size());
    }
  }
  return {space.num_dofs(), std::move(row_ptr), std::move(cols)};
}

/// A(u, v) = sum_K (grad u, grad v)_K + c (u, v)_{Gamma_h}, scattered with the
/// DOF signs. Elements are processed in index order, so the result is
/// bitwise reproducible.
inline CsrMatrix assemble_matrix(const CRSpace& space, double mass_coefficient) {
  CsrMatrix a = make_pattern(space);
  for (std::size_t k = 0; k < space.num_elements(); ++k) {
    const auto lm = local_matrices(space.frames[k]);
    const LocalMatrix local = lm.stiffness + mass_coefficient * lm.mass;
    for (int l = 0; l < 6; ++l) {
      const auto row = static_cast<std::size_t>(space.dofs.dof(k, l));
      const double sl = space.dofs.local_sign(k, l);
      for (int m = 0; m < 6; ++m) {
        a.add(row, space.dofs.dof(k, m), sl * space.dofs.local_sign(k, m) * local(l, m));
      }
    }
  }
  return a;
}

/// Load vector (f~, Phi_g)_{Gamma_h} with f~(x) = f(p(x)); `f` takes surface points.
template <class Load>
Eigen::VectorXd assemble_load(const CRSpace& space, const LevelSurface& surface, const Load& f,
                              int quadrature_degree = 4) {
  const QuadratureRule rule = triangle_rule(quadrature_degree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs()));
  for (std::size_t k = 0; k < space.num_elements(); ++k) {
    const auto& frame = space.frames[k];
    LocalVector local = LocalVector::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3& b = rule.points[q];
      const Vec3 fq = f(surface.closest_point(frame.point(b)).position);
      for (int l = 0; l < 6; ++l) {
        local[l] += rule.weights[q] * fq.dot(cr::direction(frame, l)) * cr::basis(l / 2, b);
      }
    }
    local *= frame.area;
    for (int l = 0; l < 6; ++l) rhs[space.dofs.dof(k, l)] += space.dofs.local_sign(k, l) * local[l];
  }
  return rhs;
}

struct SparseSystem {
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  double mass_coefficient = 1.0;
};

struct AssemblyOptions {
  int load_quadrature_degree = 4;
};

inline SparseSystem assemble(const CRSpace& space, const TangentialFieldSpec& spec,
                             const AssemblyOptions& options = {}) {
  SparseSystem s;
  s.mass_coefficient = spec.mass_coefficient;
  s.matrix = assemble_matrix(space, spec.mass_coefficient);
  s.rhs = assemble_load(
      space, spec.surface, [&](const Vec3& y) { return manufactured_rhs(spec, y); },
      options.load_quadrature_degree);
  return s;
}

struct Solution {
  DiscreteField field;
  CgResult solver;
};

inline Solution solve(std::shared_ptr<const CRSpace> space, const SparseSystem& system,
                      const CgOptions& options = {}) {
  CgResult r = solve_cg(system.matrix, system.rhs, options);
  Eigen::VectorXd x = r.solution;
  return {DiscreteField(std::move(space), std::move(x)), std::move(r)};
}

}  // namespace surfcr
