#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "frackpz/core/params.hpp"

namespace frackpz {

/// Uniform node set on an interval or on the radii of a ball in R^N.
/// Boundary nodes carry the exterior value 0.
class Grid {
public:
    Grid(const DomainSpec& dom, int N);

    static std::shared_ptr<const Grid> make(const DomainSpec& dom, int N = 1);

    const DomainSpec& domain() const { return dom_; }
    int dim() const { return N_; }
    bool radial() const { return dom_.kind == DomainKind::Ball; }
    int size() const { return static_cast<int>(x_.size()); }
    double h() const { return h_; }

    double node(int i) const { return x_[i]; }
    const std::vector<double>& nodes() const { return x_; }
    /// Volume of the dual cell of node i in R^N.
    double measure(int i) const { return mu_[i]; }
    const std::vector<double>& measures() const { return mu_; }
    double volume() const;

    bool is_boundary(int i) const;
    /// Index range of unknowns [first, last].
    int first_interior() const { return radial() ? 0 : 1; }
    int last_interior() const { return size() - 2; }
    int interior_count() const { return last_interior() - first_interior() + 1; }

    /// Distance to the boundary of the domain.
    double distance(int i) const;
    bool contains(double x) const;

private:
    DomainSpec dom_;
    int N_;
    double h_;
    std::vector<double> x_;
    std::vector<double> mu_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Nodal values, zero at boundary nodes and outside the domain.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(GridPtr g);
    GridFunction(GridPtr g, Eigen::VectorXd values);

    const GridPtr& grid() const { return grid_; }
    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }
    const Eigen::VectorXd& values() const { return v_; }
    Eigen::VectorXd& values() { return v_; }

    /// Piecewise-linear evaluation; exactly 0 outside the domain.
    double at(double x) const;
    bool finite() const;
    double sup() const;
    /// Forces boundary nodes to 0.
    void clamp_boundary();

    /// Unknown block (interior nodes only) and its inverse.
    Eigen::VectorXd interior() const;
    static GridFunction from_interior(GridPtr g, const Eigen::VectorXd& x);

private:
    GridPtr grid_;
    Eigen::VectorXd v_;
};

template <class F>
GridFunction sample(const GridPtr& g, F&& f) {
    GridFunction u(g);
    for (int i = 0; i < g->size(); ++i)
        if (!g->is_boundary(i)) u[i] = f(g->node(i));
    return u;
}

}  // namespace frackpz
