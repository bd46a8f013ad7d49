#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "surfcr/assembly.hpp"
#include "surfcr/convergence.hpp"
#include "surfcr/cr_space.hpp"
#include "surfcr/errors.hpp"
#include "surfcr/quadrature.hpp"
#include "surfcr/surface_mesh.hpp"
#include "surfcr/tangential.hpp"

namespace surfcr {

/// Exact data at the lift of a point x of the discrete surface.
struct ExactSample {
  Vec3 value;              // u~(x) = u(p(x))
  Mat3 discrete_gradient;  // grad_{Gamma_h} u~ = P_h grad(u o p) P_h
  Mat3 projector;          // P(p(x))
};

inline ExactSample exact_sample(const TangentialFieldSpec& spec, const ElementFrame& frame, const Vec3& x) {
  const SurfacePoint sp = spec.surface.closest_point(x);
  detail::require_on_surface(spec.surface, sp.position);
  const auto jets = detail::ambient_jets(spec, sp.position);
  const Mat3 grad = jacobian(jets.field) * spec.surface.closest_point_jacobian(x);
  return {values(jets.field), frame.projector * grad * frame.projector, sp.projector};
}

/// Broken norms of u~ - v_h on the discrete surface.
struct ErrorNorms {
  double l2_projected = 0.0;  // |P_h (u~ - v_h)|_{L2}
  double l2_exact_projected = 0.0;  // |P (u~ - v_h)|_{L2}
  double l2 = 0.0;            // |u~ - v_h|_{L2}
  double h1_seminorm = 0.0;   // |grad_{Gamma_h}(u~ - v_h)|_{L2}
  double energy = 0.0;        // (h1_seminorm^2 + l2^2)^{1/2}
};

/// `field` needs value(k, bary) and gradient(k); the gradient is projected
/// with P_h on both sides before comparison.
template <class Field>
ErrorNorms error_norms(const CRSpace& space, const Field& field, const TangentialFieldSpec& spec,
                       int quadrature_degree = 4) {
  const QuadratureRule rule = triangle_rule(quadrature_degree);
  double l2p = 0.0, l2e = 0.0, l2 = 0.0, h1 = 0.0;
  for (std::size_t k = 0; k < space.num_elements(); ++k) {
    const auto& frame = space.frames[k];
    const Mat3 gh = frame.projector * field.gradient(k) * frame.projector;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3& b = rule.points[q];
      const double w = rule.weights[q] * frame.area;
      const ExactSample ex = exact_sample(spec, frame, frame.point(b));
      const Vec3 e = ex.value - field.value(k, b);
      l2p += w * (frame.projector * e).squaredNorm();
      l2e += w * (ex.projector * e).squaredNorm();
      l2 += w * e.squaredNorm();
      h1 += w * (ex.discrete_gradient - gh).squaredNorm();
    }
  }
  ErrorNorms n;
  n.l2_projected = std::sqrt(l2p);
  n.l2_exact_projected = std::sqrt(l2e);
  n.l2 = std::sqrt(l2);
  n.h1_seminorm = std::sqrt(h1);
  n.energy = std::sqrt(h1 + l2);
  return n;
}

/// Everything measured about the tangential interpolant on one mesh.
struct InterpolationErrors {
  double h = 0.0;
  ErrorNorms norms;
  double edge_projected = 0.0;        // (sum_K sum_E |P (u~ - Pi u)|^2_{L2(E)})^{1/2}
  double edge_discrete_projected = 0.0;  // same with P_h
  double coefficient_gap = 0.0;       // max_K max_i |P_h(alpha_i - alpha_i^tan)| / |u~|_{H1(K)}
};

inline InterpolationErrors interpolation_errors(const TangentialFieldSpec& spec,
                                                const std::shared_ptr<const CRSpace>& space,
                                                int quadrature_degree = 4) {
  const DiscreteField pi_tan = interpolate_tan(spec, space);
  const ComponentwiseInterpolant pi = interpolate_componentwise(spec, space);
  InterpolationErrors out;
  out.h = space->mesh.mesh_size();
  out.norms = error_norms(*space, pi_tan, spec, quadrature_degree);

  const LineRule line = gauss_legendre(5);
  const QuadratureRule rule = triangle_rule(quadrature_degree);
  double edge_p = 0.0, edge_ph = 0.0;
  for (std::size_t k = 0; k < space->num_elements(); ++k) {
    const auto& frame = space->frames[k];
    for (int i = 0; i < 3; ++i) {
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const Vec3 b = cr::edge_point(i, line.points[q]);
        const ExactSample ex = exact_sample(spec, frame, frame.point(b));
        const Vec3 e = ex.value - pi_tan.value(k, b);
        const double w = line.weights[q] * frame.edges[i].length;
        edge_p += w * (ex.projector * e).squaredNorm();
        edge_ph += w * (frame.projector * e).squaredNorm();
      }
    }
    double local_h1 = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const ExactSample ex = exact_sample(spec, frame, frame.point(rule.points[q]));
      local_h1 += rule.weights[q] * frame.area * (ex.value.squaredNorm() + ex.discrete_gradient.squaredNorm());
    }
    const auto c = pi_tan.local_coefficients(k);
    for (int i = 0; i < 3; ++i) {
      const Vec3 alpha_tan = c[2 * i] * frame.edges[i].conormal + c[2 * i + 1] * frame.edges[i].tangent;
      const double gap = (frame.projector * (pi.alpha[k][i] - alpha_tan)).norm();
      if (local_h1 > 0.0) out.coefficient_gap = std::max(out.coefficient_gap, gap / std::sqrt(local_h1));
    }
  }
  out.edge_projected = std::sqrt(edge_p);
  out.edge_discrete_projected = std::sqrt(edge_ph);
  return out;
}

// ---------------------------------------------------------------------------
// Convergence study

struct StudyConfig {
  std::string surface = "sphere";  // sphere | torus
  std::string solution;            // sphere_eq | torus_eq; empty: matches surface
  double mass_coefficient = 0.1;
  int level_min = 2;
  int level_max = 6;
  int quad_degree = 4;       // error norms
  int load_quad_degree = 4;  // right-hand side
  double cg_tolerance = 1e-12;
  std::string out;                 // report path; empty: stdout
  std::string format = "csv";      // csv | json
  std::string export_mesh;         // OFF of the finest mesh
  std::string dump_matrix;         // MatrixMarket of the finest matrix
  std::string import_mesh;         // run one level on this OFF mesh instead

  std::string resolved_solution() const {
    if (!solution.empty()) return solution;
    return surface == "torus" ? "torus_eq" : "sphere_eq";
  }

  void validate() const {
    if (surface != "sphere" && surface != "torus") throw ConfigError("surface must be sphere or torus");
    const std::string sol = resolved_solution();
    if (sol != "sphere_eq" && sol != "torus_eq") throw ConfigError("unknown solution '" + sol + "'");
    if ((surface == "sphere") != (sol == "sphere_eq")) throw ConfigError("solution does not match surface");
    if (level_min < 0 || level_max < level_min) throw ConfigError("invalid level range");
    if (surface == "sphere" && level_max > 8) throw ConfigError("sphere levels are limited to 8");
    if (surface == "torus" && level_max > 6) throw ConfigError("torus levels are limited to 6");
    if (!(mass_coefficient > 0.0)) throw ConfigError("mass coefficient must be positive");
    if (!(cg_tolerance > 0.0)) throw ConfigError("CG tolerance must be positive");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    for (int d : {quad_degree, load_quad_degree}) {
      if (d < 1 || d > 6) throw ConfigError("quadrature degree must be in [1, 6]");
    }
  }
};

inline TangentialFieldSpec make_spec(const StudyConfig& c) {
  return c.resolved_solution() == "torus_eq" ? torus_solution(c.mass_coefficient)
                                             : sphere_solution(c.mass_coefficient);
}

/// Level k of the built-in mesh families: subdivision level for the sphere,
/// (16 2^k) x (8 2^k) grid for the torus.
inline SurfaceMesh study_mesh(const std::string& surface, int level) {
  if (surface == "torus") return build_torus_mesh(16 << level, 8 << level);
  return build_sphere_mesh(level);
}

struct LevelResult {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  ErrorNorms errors;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  double matrix_asymmetry = 0.0;
  double galerkin_defect = 0.0;  // |u^T A u - b^T u| / |b^T u|
  double seconds = 0.0;
};

struct ErrorReport {
  StudyConfig config;
  std::vector<LevelResult> levels;

  std::vector<double> column(double (*get)(const LevelResult&)) const {
    std::vector<double> v;
    for (const auto& l : levels) v.push_back(get(l));
    return v;
  }
  std::vector<double> h() const { return column([](const LevelResult& l) { return l.h; }); }
  std::vector<std::optional<double>> l2_orders() const {
    return observed_orders(column([](const LevelResult& l) { return l.errors.l2_projected; }), h());
  }
  std::vector<std::optional<double>> h1_orders() const {
    return observed_orders(column([](const LevelResult& l) { return l.errors.energy; }), h());
  }
};

/// Carries the level at which a study failed.
class StudyFailure : public Error {
 public:
  StudyFailure(int level, const std::string& what)
      : Error("level " + std::to_string(level) + ": " + what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

/// One level: assemble, solve, measure.
inline LevelResult run_level(const StudyConfig& config, const TangentialFieldSpec& spec, SurfaceMesh mesh,
                             int level, CsrMatrix* matrix_out = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  LevelResult r;
  r.level = level;
  auto space = std::make_shared<const CRSpace>(std::move(mesh));
  r.h = space->mesh.mesh_size();
  r.dofs = space->num_dofs();
  SparseSystem system = assemble(*space, spec, {config.load_quad_degree});
  r.matrix_asymmetry = system.matrix.relative_asymmetry();
  CgOptions cg;
  cg.tolerance = config.cg_tolerance;
  const Solution sol = solve(space, system, cg);
  r.cg_iterations = sol.solver.iterations;
  r.cg_residual = sol.solver.relative_residual;
  const Eigen::VectorXd& x = sol.field.coefficients();
  const double load = system.rhs.dot(x);
  r.galerkin_defect = load != 0.0 ? std::abs(x.dot(system.matrix * x) - load) / std::abs(load) : 0.0;
  r.errors = error_norms(*space, sol.field, spec, config.quad_degree);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (matrix_out != nullptr) *matrix_out = std::move(system.matrix);
  return r;
}

using ProgressCallback = std::function<void(const LevelResult&)>;

inline ErrorReport run_study(const StudyConfig& config, const ProgressCallback& progress = {});

}  // namespace surfcr

#include "surfcr/mesh_io.hpp"

namespace surfcr {

inline ErrorReport run_study(const StudyConfig& config, const ProgressCallback& progress) {
  config.validate();
  const TangentialFieldSpec spec = make_spec(config);
  ErrorReport report;
  report.config = config;
  if (!config.import_mesh.empty()) {
    try {
      SurfaceMesh mesh = read_off(config.import_mesh);
      if (mesh.max_level_set_residual(spec.surface) > 1e-10) {
        throw InvalidMesh("imported mesh has vertices off the surface");
      }
      report.levels.push_back(run_level(config, spec, std::move(mesh), 0));
    } catch (const StudyFailure&) {
      throw;
    } catch (const Error& e) {
      throw StudyFailure(0, e.what());
    }
    if (progress) progress(report.levels.back());
    return report;
  }
  for (int level = config.level_min; level <= config.level_max; ++level) {
    try {
      SurfaceMesh mesh = study_mesh(config.surface, level);
      const bool finest = level == config.level_max;
      if (finest && !config.export_mesh.empty()) write_off(mesh, std::filesystem::path(config.export_mesh));
      CsrMatrix matrix;
      report.levels.push_back(run_level(config, spec, std::move(mesh), level,
                                        finest && !config.dump_matrix.empty() ? &matrix : nullptr));
      if (finest && !config.dump_matrix.empty()) {
        write_matrix_market(matrix, std::filesystem::path(config.dump_matrix));
      }
    } catch (const Error& e) {
      throw StudyFailure(level, e.what());
    }
    if (progress) progress(report.levels.back());
  }
  return report;
}

}  // namespace surfcr
