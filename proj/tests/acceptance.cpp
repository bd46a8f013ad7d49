// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Reference {
  double h, value;
};

/// Log-log interpolation in a published error table (linear extrapolation
/// beyond its ends).
double reference_at(const std::vector<Reference>& table, double h) {
  std::size_t k = 0;
  while (k + 2 < table.size() && h < table[k + 1].h) ++k;
  const auto& a = table[k];
  const auto& b = table[k + 1];
  const double slope = std::log(a.value / b.value) / std::log(a.h / b.h);
  return b.value * std::pow(h / b.h, slope);
}

/// Largest ratio max(e/r, r/e) over the study levels.
double worst_ratio(const surfcr::ErrorReport& r, const std::vector<Reference>& table, bool l2) {
  double worst = 1.0;
  for (const auto& l : r.levels) {
    const double e = l2 ? l.errors.l2_projected : l.errors.energy;
    const double ref = reference_at(table, l.h);
    worst = std::max({worst, e / ref, ref / e});
  }
  return worst;
}

// Published tables. The sphere H1 entry at h=0.165 and the torus H1 entry at
// h=0.022 are off by a power of ten against their own orders and are left out.
const std::vector<Reference> kSphereL2 = {{0.325, 5.66e-2}, {0.165, 1.40e-2}, {0.083, 3.49e-3}, {0.041, 8.71e-4}, {0.021, 2.20e-4}};
const std::vector<Reference> kSphereH1 = {{0.325, 3.39e-1}, {0.083, 7.99e-2}, {0.041, 3.98e-2}, {0.021, 1.99e-2}};
const std::vector<Reference> kTorusL2 = {{0.364, 1.11e-1}, {0.180, 3.07e-2}, {0.089, 7.77e-3}, {0.044, 1.94e-3}, {0.022, 4.84e-4}};

bool all_ok = true;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  all_ok = all_ok && ok;
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << "  [" << detail << "]" << std::endl;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

surfcr::ErrorReport study(const std::string& surface, int first, int last) {
  surfcr::StudyConfig c;
  c.surface = surface;
  c.level_min = first;
  c.level_max = last;
  return surfcr::run_study(c, [&](const surfcr::LevelResult& r) {
    std::cerr << surface << " level " << r.level << ": h=" << r.h << " dofs=" << r.dofs << " L2=" << r.errors.l2_projected
              << " H1=" << r.errors.energy << " cg=" << r.cg_iterations << " (" << r.seconds << " s)\n";
  });
}

void study_criterion(int id, const surfcr::ErrorReport& r, double l2_lo, double l2_hi, double h1_lo, double h1_hi,
                     bool sphere) {
  const double l2 = *r.l2_orders().back();
  const double h1 = *r.h1_orders().back();
  const double finest_seconds = r.levels.back().seconds;
  bool ok = in(l2, l2_lo, l2_hi) && in(h1, h1_lo, h1_hi);
  std::ostringstream d;
  d << "L2 order " << fmt("%.3f", l2) << ", H1 order " << fmt("%.3f", h1);
  const double l2_ratio = worst_ratio(r, sphere ? kSphereL2 : kTorusL2, true);
  ok = ok && l2_ratio <= 3.0;
  d << ", worst L2 ratio to table " << fmt("%.2f", l2_ratio);
  if (sphere) {
    const double h1_ratio = worst_ratio(r, kSphereH1, false);
    ok = ok && h1_ratio <= 3.0 && finest_seconds <= 300.0;
    d << ", worst H1 ratio " << fmt("%.2f", h1_ratio) << ", finest level " << fmt("%.1f", finest_seconds) << " s";
  } else {
    // The magnitude gate names one point: L2 near h = 0.089.
    const auto& mid = r.levels[2];
    ok = ok && in(mid.errors.l2_projected / 7.77e-3, 1.0 / 3.0, 3.0);
    d << ", L2 at h=" << fmt("%.4f", mid.h) << " is " << fmt("%.3e", mid.errors.l2_projected);
  }
  report(id, sphere ? "sphere convergence" : "torus convergence", ok, d.str());
}

void checks_criterion(int id, const std::string& title, const std::vector<surfcr::Check>& checks) {
  for (const auto& c : checks) std::cerr << "  " << c << '\n';
  std::ostringstream d;
  for (std::size_t i = 0; i < checks.size(); ++i) d << (i ? ", " : "") << fmt("%.3f", checks[i].value);
  report(id, title, surfcr::all_passed(checks), "orders " + d.str());
}

void structural_criterion(const surfcr::ErrorReport& sphere, const surfcr::ErrorReport& torus) {
  std::vector<surfcr::SurfaceMesh> meshes;
  for (const auto& l : sphere.levels) meshes.push_back(surfcr::study_mesh("sphere", l.level));
  for (const auto& l : torus.levels) meshes.push_back(surfcr::study_mesh("torus", l.level));
  const auto jumps = surfcr::verify_jumps(std::move(meshes), 100);
  double asym = 0, residual = 0, defect = 0;
  for (const auto* r : {&sphere, &torus}) {
    for (const auto& l : r->levels) {
      asym = std::max(asym, l.matrix_asymmetry);
      residual = std::max(residual, l.cg_residual);
      defect = std::max(defect, l.galerkin_defect);
    }
  }
  const bool ok = jumps[0].passed() && jumps[1].passed() && asym <= 1e-12 && residual <= 1e-12 && defect <= 1e-10;
  std::ostringstream d;
  d << "max jump " << fmt("%.2e", jumps[0].value) << ", max |v.n_h| " << fmt("%.2e", jumps[1].value) << ", asymmetry "
    << fmt("%.2e", asym) << ", CG residual " << fmt("%.2e", residual) << ", Galerkin defect " << fmt("%.2e", defect);
  report(5, "structural invariants", ok, d.str());
}

void oracle_criterion() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto& spec : {surfcr::sphere_solution(), surfcr::torus_solution()}) {
    const test::FdTangentialOracle fd{spec, 1e-4};
    for (int i = 0; i < 200; ++i) {
      const surfcr::Vec3 y = test::random_surface_point(spec.surface);
      worst = std::max(worst, (surfcr::bochner_laplacian(spec, y) - fd.bochner_laplacian(y)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (surfcr::manufactured_rhs(spec, y) - fd.rhs(y)).cwiseAbs().maxCoeff());
    }
  }
  const double t = seconds_since(start);
  report(6, "AD against finite differences", worst < 1e-5 && t < 10.0,
         "max componentwise error " + fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s");
}

void local_matrix_criterion() {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto x = test::random_triangle(test::uniform(0.05, 2.0));
    const auto lib = surfcr::local_matrices(surfcr::compute_frame(x));
    const auto ref = test::reference_oracle(x);
    const double scale = std::max(1.0, ref.stiffness.cwiseAbs().maxCoeff());
    worst = std::max({worst, (lib.stiffness - ref.stiffness).cwiseAbs().maxCoeff() / scale,
                      (lib.mass - ref.mass).cwiseAbs().maxCoeff()});
  }
  report(7, "local matrices against reference-element quadrature", worst <= 1e-12, "max deviation " + fmt("%.2e", worst));
}

}  // namespace

int main() {
  try {
    const auto sphere = study("sphere", 2, 6);
    study_criterion(1, sphere, 1.9, 2.1, 0.95, 1.05, true);
    const auto torus = study("torus", 1, 5);
    study_criterion(2, torus, 1.85, 2.1, 0.95, 1.1, false);
    checks_criterion(3, "geometry approximation rates", surfcr::verify_geometry());
    checks_criterion(4, "interpolation rates", surfcr::verify_interpolation());
    structural_criterion(sphere, torus);
    oracle_criterion();
    local_matrix_criterion();
  } catch (const std::exception& e) {
    std::cout << "FAIL  aborted: " << e.what() << std::endl;
    return 1;
  }
  return all_ok ? 0 : 1;
}
