#pragma once

#include <Eigen/Dense>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/params.hpp"
#include "frackpz/operators/fraclap.hpp"

namespace frackpz {

/// Interior matrix of u -> (-Delta)^s u - B du/dx, with du/dx the stencil of
/// finite_derivative. B is the (radial) drift component per node.
Eigen::MatrixXd drift_matrix(const GridPtr& g, double s, const GridFunction& B,
                             BoundaryMode mode = BoundaryMode::Distance);

/// (-Delta)^s u - B du/dx.
GridFunction drift_apply(const GridFunction& u, const GridFunction& B, const ProblemParams& p,
                         BoundaryMode mode = BoundaryMode::Distance);

}  // namespace frackpz
