#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/params.hpp"

namespace frackpz {

/// Green function of (-Delta)^s on B_R with zero exterior data,
///   G(x,y) = kappa R^{2s-N} |x'-y'|^{2s-N} B(z),  x' = x/R, y' = y/R,
///   B(z) = int_0^z t^{s-1} (1+t)^{-N/2} dt,  z = (1-|x'|^2)(1-|y'|^2)/|x'-y'|^2.
/// B is tabulated in log z with Hermite cubics for speed.
class BallGreenFunction {
public:
    BallGreenFunction(int N, double s, double R = 1.0, double kappa = 1.0);

    int dim() const { return N_; }
    double s() const { return s_; }
    double radius() const { return R_; }
    double kappa() const { return kappa_; }
    void set_kappa(double k) { kappa_ = k; }

    /// B(z) from the table.
    double profile(double z) const;
    /// B(z) from the incomplete beta function.
    double profile_exact(double z) const;

    /// G(x, y) for points of R^N given as coordinate arrays.
    double operator()(const double* x, const double* y) const;
    double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
        return (*this)(x.data(), y.data());
    }
    /// G at |x-y| = d with boundary factor A = (R^2-|x|^2)(R^2-|y|^2).
    double value(double d, double A) const;

    /// Integral of G(r e_1, rho w) over w in S^{N-1} (sum over +-rho for N = 1).
    double sphere_integral(double r, double rho) const;

private:
    int N_;
    double s_;
    double R_;
    double kappa_;
    double zeta0_, dzeta_;
    std::vector<double> tab_, dtab_;
};

/// Green kernel on the nodes of a radial ball grid.
///   nodal(i, j)   = kappa * sphere_integral(r_i, r_j), symmetric;
///   weights(i, j) = product-integration weights so that
///                   v(r_i) = sum_j weights(i, j) f(r_j) for piecewise-linear f.
/// Boundary rows vanish.
class BallGreenKernel {
public:
    BallGreenKernel(GridPtr g, double s, double kappa);

    /// Builds with kappa fitted so that Getoor data reproduces (R^2-r^2)^s.
    static std::shared_ptr<const BallGreenKernel> get(const GridPtr& g, double s);

    const GridPtr& grid() const { return grid_; }
    double s() const { return s_; }
    double kappa() const { return fn_.kappa(); }
    const BallGreenFunction& function() const { return fn_; }
    const Eigen::MatrixXd& nodal() const { return G_; }
    const Eigen::MatrixXd& weights() const { return W_; }

    GridFunction apply(const GridFunction& f) const;

    /// Least-squares kappa for Getoor data, relative to the kernel's current kappa.
    double fitted_kappa() const;

private:
    GridPtr grid_;
    double s_;
    BallGreenFunction fn_;
    Eigen::MatrixXd G_;
    Eigen::MatrixXd W_;
};

/// Assembles the kernel for p.domain (ball only).
std::shared_ptr<const BallGreenKernel> ball_green_build(const ProblemParams& p);

/// v(x_i) = int G(x_i, y) f(y) dy on the grid of f.
GridFunction green_solve(const GridFunction& f, double s);

}  // namespace frackpz
