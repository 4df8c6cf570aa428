#include "frackpz/operators/drift.hpp"

#include <stdexcept>

#include "frackpz/core/norms.hpp"

namespace frackpz {

Eigen::MatrixXd drift_matrix(const GridPtr& g, double s, const GridFunction& B, BoundaryMode mode) {
    if (B.size() != g->size()) throw std::invalid_argument("drift field does not match grid");
    if (!B.finite()) throw std::invalid_argument("drift field must be finite");
    Eigen::MatrixXd M = FracLapMatrix::get(g, s, mode)->matrix();
    const int first = g->first_interior(), m = g->interior_count();
    for (int k = 0; k < m; ++k) {
        GridFunction e(g);
        e[first + k] = 1;
        GridFunction d = finite_derivative(e);
        for (int r = 0; r < m; ++r) M(r, k) -= B[first + r] * d[first + r];
    }
    return M;
}

GridFunction drift_apply(const GridFunction& u, const GridFunction& B, const ProblemParams& p, BoundaryMode mode) {
    if (B.size() != u.size()) throw std::invalid_argument("drift field does not match grid");
    GridFunction out = fraclap(u, p.s, mode);
    GridFunction d = finite_derivative(u);
    for (int i = 0; i < out.size(); ++i)
        if (!u.grid()->is_boundary(i)) out[i] -= B[i] * d[i];
    return out;
}

}  // namespace frackpz
