#include "frackpz/solvers/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace frackpz {

PotentialBox::PotentialBox(const DomainSpec& dom, int N) {
    inner_ = Grid::make(dom, N);
    const int n = dom.grid_n;
    const int nb = 3 * (n - 1) + 1;
    if (dom.kind == DomainKind::Ball) {
        box_ = Grid::make(DomainSpec::ball(3 * dom.R, nb), N);
        offset_ = 0;
    } else {
        const double L = dom.b - dom.a;
        box_ = Grid::make(DomainSpec::interval(dom.a - L, dom.b + L, nb), N);
        offset_ = n - 1;
    }
}

GridFunction PotentialBox::source(const SourceSpec& f) const {
    return extend(f.evaluate(inner_));
}

GridFunction PotentialBox::extend(const GridFunction& u) const {
    GridFunction out(box_);
    for (int i = 0; i < inner_->size(); ++i)
        if (!inner_->is_boundary(i)) out[index(i)] = u[i];
    return out;
}

GridFunction PotentialBox::restrict(const GridFunction& u) const {
    GridFunction out(inner_);
    for (int i = 0; i < inner_->size(); ++i)
        if (!inner_->is_boundary(i)) out[i] = u[index(i)];
    return out;
}

double m00_constant(const GridFunction& f_box, double s, double q) {
    const double a = 2 * s - 1;
    GridFunction P = riesz_apply(f_box, a);
    GridFunction Pq = P;
    for (int i = 0; i < Pq.size(); ++i) Pq[i] = std::pow(std::max(P[i], 0.0), q);
    GridFunction Q = riesz_apply(Pq, a);
    double c = 0;
    for (int i = 0; i < P.size(); ++i)
        if (P[i] > 0) c = std::max(c, Q[i] / P[i]);
    return c;
}

}  // namespace frackpz
