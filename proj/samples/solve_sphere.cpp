// Solves the sphere problem on one mesh and prints the errors.

#include <iostream>
#include <memory>

#include "surfcr/surfcr.hpp"

int main(int argc, char** argv) {
  const int level = argc > 1 ? std::atoi(argv[1]) : 3;
  const surfcr::TangentialFieldSpec spec = surfcr::sphere_solution(0.1);

  auto space = std::make_shared<const surfcr::CRSpace>(surfcr::build_sphere_mesh(level, spec.surface));
  const surfcr::SparseSystem system = surfcr::assemble(*space, spec);
  const surfcr::Solution solution = surfcr::solve(space, system);
  const surfcr::ErrorNorms e = surfcr::error_norms(*space, solution.field, spec);

  std::cout << "h = " << space->mesh.mesh_size() << ", dofs = " << space->num_dofs()
            << ", CG iterations = " << solution.solver.iterations << '\n'
            << "|P_h(u - u_h)|_L2 = " << e.l2_projected << '\n'
            << "|u - u_h|_h       = " << e.energy << '\n';
}
