#include "frackpz/operators/riesz.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "frackpz/core/parallel.hpp"
#include "frackpz/core/shell_kernel.hpp"
#include "frackpz/operators/constants.hpp"
#include "quad.hpp"

namespace frackpz {

namespace {

/// Moments of the kernel density against the hat basis, for a target point x.
void riesz_row(const Grid& g, double alpha, double x, double* out) {
    const int n = g.size();
    const int N = g.dim();
    const double h = g.h();
    const double beta = N - alpha;
    for (int j = 0; j < n; ++j) out[j] = 0;
    auto kden = [&](double y) {
        if (g.radial()) return std::pow(y, N - 1) * shell_kernel(N, beta, x, y);
        return std::pow(std::abs(x - y), -beta);
    };
    for (int j = 0; j + 1 < n; ++j) {
        const double y0 = g.node(j);
        const double gap = std::max({0.0, y0 - x, x - (y0 + h)}) / h;
        // the diagonal singularity sits on a node, or for N = 1 radial also at -x
        const bool sing = gap < 1 || (g.radial() && N == 1 && x + y0 < h);
        const detail::Rule* rule;
        if (sing) rule = &detail::de_rule();
        else if (gap <= 3) rule = &detail::gauss_rule(16);
        else if (gap <= 12) rule = &detail::gauss_rule(8);
        else rule = &detail::gauss_rule(4);
        auto m = detail::cell_moments(kden, y0, h, *rule);
        out[j] += m[0];
        out[j + 1] += m[1];
    }
}

}  // namespace

RieszKernel::RieszKernel(GridPtr g, double alpha) : grid_(std::move(g)), alpha_(alpha) {
    const int N = grid_->dim();
    if (!(alpha > 0 && alpha < N)) throw std::invalid_argument("Riesz order must lie in (0, N)");
    const int n = grid_->size();
    K_.setZero(n, n);
    parallel_for(n, [&](int i) {
        std::vector<double> row(n);
        riesz_row(*grid_, alpha_, grid_->node(i), row.data());
        for (int j = 0; j < n; ++j) K_(i, j) = row[j];
    });
}

std::shared_ptr<const RieszKernel> RieszKernel::get(const GridPtr& g, double alpha) {
    static std::map<std::string, std::shared_ptr<const RieszKernel>> cache;
    static std::mutex mu;
    const DomainSpec& d = g->domain();
    std::ostringstream key;
    key << std::hexfloat << static_cast<int>(d.kind) << ':' << d.a << ':' << d.b << ':' << d.R << ':'
        << d.grid_n << ':' << g->dim() << ':' << alpha;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key.str());
        if (it != cache.end()) return it->second;
    }
    auto K = std::make_shared<const RieszKernel>(g, alpha);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key.str(), K).first->second;
}

GridFunction RieszKernel::apply(const GridFunction& g) const {
    return GridFunction(g.grid(), K_ * g.values());
}

GridFunction riesz_apply(const GridFunction& g, double alpha, bool normalized) {
    GridFunction out = RieszKernel::get(g.grid(), alpha)->apply(g);
    if (normalized) out.values() *= riesz_constant(g.grid()->dim(), alpha);
    return out;
}

double riesz_at(const GridFunction& g, double alpha, double x, bool normalized) {
    const Grid& gr = *g.grid();
    if (!(alpha > 0 && alpha < gr.dim())) throw std::invalid_argument("Riesz order must lie in (0, N)");
    std::vector<double> row(gr.size());
    riesz_row(gr, alpha, gr.radial() ? std::abs(x) : x, row.data());
    double v = 0;
    for (int j = 0; j < gr.size(); ++j) v += row[j] * g[j];
    return normalized ? v * riesz_constant(gr.dim(), alpha) : v;
}

}  // namespace frackpz
