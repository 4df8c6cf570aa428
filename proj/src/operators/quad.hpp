#pragma once

#include <array>
#include <vector>

namespace frackpz::detail {

/// Quadrature rule on [0, 1].
struct Rule {
    std::vector<double> x, w;
};

/// Gauss-Legendre with n points (n in {3, 4, 6, 8, 12, 16, 32}).
const Rule& gauss_rule(int n);
/// Fixed double-exponential rule, robust to endpoint singularities and kinks.
const Rule& de_rule();

/// Moments of g over the cell [y0, y0 + h] against the two hat pieces and
/// the interpolation-error bubble: { int g (1-t), int g t, int g h^2 t(1-t)/2 }.
template <class G>
std::array<double, 3> cell_moments(G&& g, double y0, double h, const Rule& R) {
    std::array<double, 3> m{0, 0, 0};
    for (std::size_t k = 0; k < R.x.size(); ++k) {
        double t = R.x[k];
        double v = g(y0 + t * h) * R.w[k] * h;
        m[0] += v * (1 - t);
        m[1] += v * t;
        m[2] += v * 0.5 * h * h * t * (1 - t);
    }
    return m;
}

}  // namespace frackpz::detail
