#pragma once

#include "surfcr/errors.hpp"
#include "surfcr/jet.hpp"
#include "surfcr/expr.hpp"
#include "surfcr/level_surface.hpp"
#include "surfcr/tangential.hpp"
#include "surfcr/quadrature.hpp"
#include "surfcr/surface_mesh.hpp"
#include "surfcr/mesh_io.hpp"
#include "surfcr/geometry_rates.hpp"
#include "surfcr/convergence.hpp"
#include "surfcr/cr_space.hpp"
#include "surfcr/sparse.hpp"
#include "surfcr/assembly.hpp"
#include "surfcr/analysis.hpp"
#include "surfcr/report.hpp"
#include "surfcr/verification.hpp"
