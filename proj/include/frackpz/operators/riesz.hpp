#pragma once

#include <Eigen/Dense>
#include <memory>

#include "frackpz/core/grid.hpp"

namespace frackpz {

/// Dense product-integration matrix of I_alpha g(x) = int g(y) |x-y|^{alpha-N} dy
/// for g piecewise linear on the grid and zero outside it. Rows cover every
/// node, boundary nodes included, since potentials do not vanish there.
class RieszKernel {
public:
    RieszKernel(GridPtr g, double alpha);
    static std::shared_ptr<const RieszKernel> get(const GridPtr& g, double alpha);

    const GridPtr& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    const Eigen::MatrixXd& matrix() const { return K_; }

    /// Unnormalized potential on all nodes.
    GridFunction apply(const GridFunction& g) const;

private:
    GridPtr grid_;
    double alpha_;
    Eigen::MatrixXd K_;
};

/// I_alpha g on the grid of g. normalized multiplies by c_alpha so that
/// c_{2s} I_{2s} inverts (-Delta)^s on R^N.
GridFunction riesz_apply(const GridFunction& g, double alpha, bool normalized = false);

/// I_alpha g at an arbitrary point (radius for ball grids).
double riesz_at(const GridFunction& g, double alpha, double x, bool normalized = false);

}  // namespace frackpz
