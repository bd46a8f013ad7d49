// Convergence studies and verification suites for the tangential CR method.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "surfcr/surfcr.hpp"

namespace {

int run_verify(const std::string& which) {
  std::vector<surfcr::Check> checks;
  auto append = [&](std::vector<surfcr::Check> more) { checks.insert(checks.end(), more.begin(), more.end()); };
  if (which == "geometry" || which == "all") append(surfcr::verify_geometry());
  if (which == "interpolation" || which == "all") append(surfcr::verify_interpolation());
  if (which == "jumps" || which == "all") append(surfcr::verify_jumps());
  for (const auto& c : checks) std::cout << c << '\n';
  return surfcr::all_passed(checks) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tangential Crouzeix-Raviart solver for the Bochner-Laplace problem on sphere and torus"};

  std::string config_path, surface, levels, format, out, export_mesh, import_mesh, dump_matrix, verify;
  double mass = 0.0, cg_tol = 0.0;
  int quad = 0, load_quad = 0;
  bool quiet = false;

  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--surface", surface, "sphere or torus")->check(CLI::IsMember({"sphere", "torus"}));
  app.add_option("--levels", levels, "refinement levels a..b");
  app.add_option("--mass-coeff", mass, "zero-order coefficient c");
  app.add_option("--quad-degree", quad, "quadrature degree of the error norms");
  app.add_option("--load-quad-degree", load_quad, "quadrature degree of the load vector");
  app.add_option("--cg-tol", cg_tol, "relative residual tolerance of CG");
  app.add_option("--out", out, "report path (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--export-mesh", export_mesh, "write the finest mesh as OFF");
  app.add_option("--import-mesh", import_mesh, "solve on an OFF mesh instead of the built-in sequence");
  app.add_option("--dump-matrix", dump_matrix, "write the finest matrix in MatrixMarket format");
  app.add_option("--verify", verify, "run a verification suite instead of a study")
      ->check(CLI::IsMember({"geometry", "interpolation", "jumps", "all"}));
  app.add_flag("-q,--quiet", quiet, "no progress output on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (!verify.empty()) return run_verify(verify);

    surfcr::StudyConfig config;
    if (!config_path.empty()) config = surfcr::parse_config(std::filesystem::path(config_path));
    if (!surface.empty()) config.surface = surface;
    if (!levels.empty()) surfcr::apply_setting(config, "levels", levels);
    if (app.count("--mass-coeff") > 0) config.mass_coefficient = mass;
    if (app.count("--quad-degree") > 0) config.quad_degree = quad;
    if (app.count("--load-quad-degree") > 0) config.load_quad_degree = load_quad;
    if (app.count("--cg-tol") > 0) config.cg_tolerance = cg_tol;
    if (!out.empty()) config.out = out;
    if (!format.empty()) config.format = format;
    if (!export_mesh.empty()) config.export_mesh = export_mesh;
    if (!import_mesh.empty()) config.import_mesh = import_mesh;
    if (!dump_matrix.empty()) config.dump_matrix = dump_matrix;
    // A solution id from the config file must follow a surface override.
    if (!surface.empty() && config_path.empty()) config.solution.clear();

    auto progress = [&](const surfcr::LevelResult& r) {
      if (quiet) return;
      std::cerr << "level " << r.level << ": h=" << r.h << " dofs=" << r.dofs << " cg=" << r.cg_iterations
                << " L2=" << r.errors.l2_projected << " H1=" << r.errors.energy << " (" << r.seconds << " s)\n";
    };
    const surfcr::ErrorReport report = surfcr::run_study(config, progress);
    if (config.out.empty()) {
      surfcr::emit_report(report, config.format, std::cout);
    } else {
      surfcr::emit_report(report, config.format, std::filesystem::path(config.out));
    }
    return 0;
  } catch (const surfcr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
