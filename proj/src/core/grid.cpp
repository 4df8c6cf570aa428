#include "frackpz/core/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "frackpz/core/shell_kernel.hpp"

namespace frackpz {

Grid::Grid(const DomainSpec& dom, int N) : dom_(dom), N_(N) {
    dom_.validate();
    if (dom.kind == DomainKind::Interval && N != 1)
        throw std::invalid_argument("interval grids are one-dimensional");
    if (N < 1) throw std::invalid_argument("dimension must be >= 1");
    const int n = dom.grid_n;
    h_ = dom.h();
    x_.resize(n);
    mu_.resize(n);
    if (dom.kind == DomainKind::Interval) {
        for (int i = 0; i < n; ++i) x_[i] = dom.a + i * h_;
        x_[n - 1] = dom.b;
        for (int i = 0; i < n; ++i) mu_[i] = (i == 0 || i == n - 1) ? 0.5 * h_ : h_;
    } else {
        const double S = sphere_area(N);
        for (int i = 0; i < n; ++i) x_[i] = i * h_;
        x_[n - 1] = dom.R;
        for (int i = 0; i < n; ++i) {
            double lo = std::max(0.0, x_[i] - 0.5 * h_);
            double hi = std::min(dom.R, x_[i] + 0.5 * h_);
            mu_[i] = S * (std::pow(hi, N) - std::pow(lo, N)) / N;
        }
    }
}

std::shared_ptr<const Grid> Grid::make(const DomainSpec& dom, int N) {
    return std::make_shared<const Grid>(dom, N);
}

double Grid::volume() const {
    if (!radial()) return dom_.b - dom_.a;
    return sphere_area(N_) * std::pow(dom_.R, N_) / N_;
}

bool Grid::is_boundary(int i) const {
    return i == size() - 1 || (!radial() && i == 0);
}

double Grid::distance(int i) const {
    if (radial()) return dom_.R - x_[i];
    return std::min(x_[i] - dom_.a, dom_.b - x_[i]);
}

bool Grid::contains(double x) const {
    if (radial()) return std::abs(x) < dom_.R;
    return x > dom_.a && x < dom_.b;
}

GridFunction::GridFunction(GridPtr g) : grid_(std::move(g)), v_(Eigen::VectorXd::Zero(grid_->size())) {}

GridFunction::GridFunction(GridPtr g, Eigen::VectorXd values) : grid_(std::move(g)), v_(std::move(values)) {
    if (v_.size() != grid_->size()) throw std::invalid_argument("value count does not match grid");
}

double GridFunction::at(double x) const {
    const Grid& g = *grid_;
    if (g.radial()) x = std::abs(x);
    if (!g.contains(x)) return 0.0;
    double t = (x - g.node(0)) / g.h();
    int j = std::min(static_cast<int>(t), g.size() - 2);
    double w = t - j;
    return (1 - w) * v_[j] + w * v_[j + 1];
}

bool GridFunction::finite() const { return v_.allFinite(); }

double GridFunction::sup() const { return v_.size() ? v_.cwiseAbs().maxCoeff() : 0.0; }

void GridFunction::clamp_boundary() {
    for (int i = 0; i < size(); ++i)
        if (grid_->is_boundary(i)) v_[i] = 0;
}

Eigen::VectorXd GridFunction::interior() const {
    return v_.segment(grid_->first_interior(), grid_->interior_count());
}

GridFunction GridFunction::from_interior(GridPtr g, const Eigen::VectorXd& x) {
    GridFunction u(g);
    u.v_.segment(g->first_interior(), g->interior_count()) = x;
    return u;
}

}  // namespace frackpz
