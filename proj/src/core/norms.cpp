#include "frackpz/core/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "frackpz/core/shell_kernel.hpp"

namespace frackpz {

double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 16) {
        double s = 0;
        for (double v : x) s += v;
        return s;
    }
    std::size_t mid = x.size() / 2;
    return pairwise_sum(x.first(mid)) + pairwise_sum(x.subspan(mid));
}

GridFunction truncate(const GridFunction& u, double k) {
    if (!(k > 0)) throw std::invalid_argument("truncation level must be positive");
    GridFunction t = u;
    for (int i = 0; i < t.size(); ++i) t[i] = std::clamp(u[i], -k, k);
    return t;
}

GridFunction remainder(const GridFunction& u, double k) {
    GridFunction t = truncate(u, k);
    GridFunction r = u;
    r.values() -= t.values();
    return r;
}

double lp_norm(const GridFunction& u, double p) {
    if (!(p >= 1)) throw std::invalid_argument("p must be >= 1");
    const Grid& g = *u.grid();
    if (std::isinf(p)) return u.sup();
    std::vector<double> terms(u.size());
    for (int i = 0; i < u.size(); ++i) terms[i] = std::pow(std::abs(u[i]), p) * g.measure(i);
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

double weak_lp_norm(const GridFunction& u, double p) {
    if (!(p >= 1)) throw std::invalid_argument("p must be >= 1");
    const Grid& g = *u.grid();
    std::vector<int> idx(u.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::abs(u[a]) > std::abs(u[b]); });
    double best = 0, cum = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        double t = std::abs(u[idx[k]]);
        cum += g.measure(idx[k]);
        // ties share one level set
        if (k + 1 < idx.size() && std::abs(u[idx[k + 1]]) == t) continue;
        if (t > 0) best = std::max(best, t * std::pow(cum, 1.0 / p));
    }
    return best;
}

double gagliardo_seminorm(const GridFunction& u, double s, bool include_exterior) {
    const Grid& g = *u.grid();
    const int n = g.size();
    const int N = g.dim();
    const double beta = N + 2 * s;
    const double S = sphere_area(N);
    std::vector<double> rows(n, 0.0);
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            row[j] = 0;
            if (j == i) continue;
            double d = u[i] - u[j];
            if (d == 0) continue;
            double k = g.radial() ? shell_kernel(N, beta, g.node(i), g.node(j)) / S
                                  : std::pow(std::abs(g.node(i) - g.node(j)), -beta);
            row[j] = d * d * k * g.measure(j);
        }
        rows[i] = pairwise_sum(row) * g.measure(i);
        if (include_exterior && u[i] != 0) {
            double tail;
            if (g.radial()) {
                tail = exterior_tail(N, beta, g.node(i), g.domain().R);
            } else {
                double x = g.node(i), a = g.domain().a, b = g.domain().b;
                tail = (std::pow(x - a, -2 * s) + std::pow(b - x, -2 * s)) / (2 * s);
            }
            rows[i] += 2 * u[i] * u[i] * tail * g.measure(i);
        }
    }
    return std::sqrt(pairwise_sum(rows));
}

GridFunction finite_derivative(const GridFunction& u) {
    const Grid& g = *u.grid();
    const int n = g.size();
    const double h = g.h();
    GridFunction d(u.grid());
    const int lo = g.first_interior(), hi = g.last_interior();
    for (int i = lo; i <= hi; ++i) {
        if (g.radial() && i == 0) continue;
        bool left_edge = !g.radial() && i == lo;
        if (left_edge && i + 2 < n) {
            d[i] = (-3 * u[i] + 4 * u[i + 1] - u[i + 2]) / (2 * h);
        } else if (i == hi && i - 2 >= 0) {
            d[i] = (3 * u[i] - 4 * u[i - 1] + u[i - 2]) / (2 * h);
        } else {
            d[i] = (u[i + 1] - u[i - 1]) / (2 * h);
        }
    }
    return d;
}

GridFunction finite_gradient(const GridFunction& u) {
    if (u.size() < 3) throw std::invalid_argument("gradient needs at least 3 nodes");
    GridFunction d = finite_derivative(u);
    d.values() = d.values().cwiseAbs();
    return d;
}

GridFunction boundary_distance(const GridPtr& g) {
    GridFunction d(g);
    for (int i = 0; i < g->size(); ++i) d[i] = g->distance(i);
    return d;
}

}  // namespace frackpz
