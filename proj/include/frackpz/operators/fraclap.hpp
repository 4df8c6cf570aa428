#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/params.hpp"

namespace frackpz {

/// How grid functions are assumed to behave at the boundary node.
///  Distance: u = l^s v with l a smooth distance proxy and v smooth, the
///            regime of solutions with zero exterior data (default).
///  Zero:     u itself is interpolated and vanishes at the boundary node,
///            for functions that are Lipschitz up to the boundary.
///  Open:     u is interpolated up to the boundary from inside and jumps to
///            zero across it (truncations of functions defined beyond the
///            domain).
enum class BoundaryMode { Distance, Zero, Open };

/// Dense discrete (-Delta)^s on the interior unknowns of an interval grid
/// (N = 1) or a radial ball grid (N = 1, 2, 3).
///
/// Row i approximates a_{N,s} P.V. int (u(x_i) - u(y)) |x_i - y|^{-N-2s} dy.
/// Writing u = w v, the weight part v(x_i) (-Delta)^s w is integrated
/// adaptively from the explicit w; the remaining integral of
/// w(y)(v(x_i) - v(y)) uses a second-order expansion on the ball B_h(x_i) and
/// product integration of the piecewise-linear interpolant of v outside it,
/// plus the leading interpolation-error correction.
class FracLapMatrix {
public:
    FracLapMatrix(GridPtr g, double s, BoundaryMode mode = BoundaryMode::Distance);

    /// Shared instance per (grid layout, s, mode); assembly is the expensive step.
    static std::shared_ptr<const FracLapMatrix> get(const GridPtr& g, double s,
                                                    BoundaryMode mode = BoundaryMode::Distance);

    const GridPtr& grid() const { return grid_; }
    double s() const { return s_; }
    double a() const { return a_; }
    BoundaryMode mode() const { return mode_; }

    /// Interior-by-interior matrix acting on nodal values of u.
    const Eigen::MatrixXd& matrix() const { return A_; }
    /// (-Delta)^s w / a at interior nodes for the boundary weight w.
    const Eigen::VectorXd& weight_symbol() const { return lam_; }

    GridFunction apply(const GridFunction& u) const;
    /// Solves A u = g on the interior unknowns.
    GridFunction solve(const GridFunction& g) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& g) const;
    /// Reciprocal condition estimate from the LU factors.
    double rcond() const;

private:
    void assemble();
    const Eigen::PartialPivLU<Eigen::MatrixXd>& lu() const;

    GridPtr grid_;
    double s_;
    double a_;
    BoundaryMode mode_;
    Eigen::MatrixXd A_;
    Eigen::VectorXd lam_;
    mutable std::once_flag lu_once_;
    mutable std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

/// (-Delta)^s on an interval grid; rejects non-zero boundary values.
GridFunction fraclap_direct(const GridFunction& u, const ProblemParams& p,
                            BoundaryMode mode = BoundaryMode::Distance);
/// (-Delta)^s of a radial function on a ball grid.
GridFunction fraclap_radial(const GridFunction& u, const ProblemParams& p,
                            BoundaryMode mode = BoundaryMode::Distance);
/// Dispatches on the grid kind.
GridFunction fraclap(const GridFunction& u, double s, BoundaryMode mode = BoundaryMode::Distance);

/// (-Delta)^s w of the boundary weight w = l^s, with l(y) = (y-a)(b-y)/(b-a)
/// on intervals and (R^2 - |y|^2)/(2R) on balls, evaluated at x by adaptive
/// quadrature (without the factor a_{N,s}).
double weight_symbol(const Grid& g, double s, double x);

}  // namespace frackpz
