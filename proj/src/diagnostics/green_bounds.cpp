#include <algorithm>
#include <cmath>
#include <random>

#include "frackpz/diagnostics/diagnostics.hpp"

namespace frackpz {

namespace {

/// Uniform in [0, 1) from the top 53 bits; independent of the standard library.
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void point_in_ball(std::mt19937_64& rng, int N, double R, double* x) {
    for (;;) {
        double r2 = 0;
        for (int k = 0; k < N; ++k) {
            x[k] = R * (2 * unit(rng) - 1);
            r2 += x[k] * x[k];
        }
        if (r2 < R * R) return;
    }
}

double norm(const double* x, int N) {
    double r2 = 0;
    for (int k = 0; k < N; ++k) r2 += x[k] * x[k];
    return std::sqrt(r2);
}

}  // namespace

BoundCheckReport check_green_bounds(const BallGreenKernel& kernel, int samples, unsigned seed) {
    const Grid& g = *kernel.grid();
    const BallGreenFunction& G = kernel.function();
    const int N = g.dim();
    const double s = kernel.s(), R = G.radius(), h = g.h();
    BoundCheckReport rep;
    rep.grid_n = g.size();
    rep.seed = seed;
    const Eigen::MatrixXd& Gn = kernel.nodal();
    double gmax = 0;
    for (int i = 0; i < Gn.rows(); ++i)
        for (int j = 0; j < Gn.cols(); ++j) {
            // the diagonal is infinite for N >= 2
            if (!std::isfinite(Gn(i, j)) || !std::isfinite(Gn(j, i))) continue;
            rep.symmetry_error = std::max(rep.symmetry_error, std::abs(Gn(i, j) - Gn(j, i)));
            gmax = std::max(gmax, std::abs(Gn(i, j)));
        }
    if (gmax > 0) rep.symmetry_error /= gmax;

    std::mt19937_64 rng(seed);
    double x[3], y[3], xp[3], xm[3];
    for (int k = 0; k < samples; ++k) {
        point_in_ball(rng, N, R, x);
        point_in_ball(rng, N, R, y);
        double diff[3];
        for (int c = 0; c < N; ++c) diff[c] = x[c] - y[c];
        const double dist = norm(diff, N);
        const double dx = R - norm(x, N), dy = R - norm(y, N);
        if (dist < 2 * h) {
            ++rep.excluded;
            continue;
        }
        const double b0 = std::pow(dist, 2 * s - N);
        const double b1 = std::pow(dx, s) * std::pow(dist, s - N);
        const double b2 = std::pow(dy, s) * std::pow(dist, s - N);
        const double bound = std::min({b0, b1, b2});
        BoundSample smp;
        smp.dist = dist, smp.dx = dx, smp.dy = dy;
        smp.branch = bound == b0 ? 0 : bound == b1 ? 1 : 2;
        smp.ratio = G(x, y) / bound;
        ++rep.branch_counts[smp.branch];
        ++rep.samples;
        rep.worst_ratio = std::max(rep.worst_ratio, smp.ratio);
        if (dx >= 2 * h) {
            const double eta = 1e-3 * std::min(dist, dx);
            double g2 = 0;
            for (int c = 0; c < N; ++c) {
                std::copy(x, x + N, xp);
                std::copy(x, x + N, xm);
                xp[c] += eta;
                xm[c] -= eta;
                const double d = (G(xp, y) - G(xm, y)) / (2 * eta);
                g2 += d * d;
            }
            smp.grad_ratio = std::sqrt(g2) * std::pow(dist, N - 2 * s + 1);
            ++rep.grad_samples;
            rep.grad_fitted_constant = std::max(rep.grad_fitted_constant, smp.grad_ratio);
        }
        rep.scatter.push_back(smp);
    }
    rep.fitted_constant = rep.worst_ratio;
    for (const auto& smp : rep.scatter) {
        if (smp.ratio > rep.fitted_constant * (1 + 1e-9)) ++rep.violations;
        if (smp.grad_ratio > rep.grad_fitted_constant * (1 + 1e-9)) ++rep.grad_violations;
    }
    rep.pass = std::isfinite(rep.fitted_constant) && std::isfinite(rep.grad_fitted_constant) && rep.violations == 0 &&
               rep.grad_violations == 0 && rep.samples > 0 && rep.symmetry_error <= 1e-10;
    return rep;
}

GreenRefinement check_green_bounds_refinement(int N, double s, const std::vector<int>& grid_ns, int samples,
                                              unsigned seed) {
    GreenRefinement out;
    double lo = kInf, hi = 0, glo = kInf, ghi = 0;
    bool ok = !grid_ns.empty();
    for (int n : grid_ns) {
        auto g = Grid::make(DomainSpec::ball(1.0, n), N);
        auto K = BallGreenKernel::get(g, s);
        out.levels.push_back(check_green_bounds(*K, samples, seed));
        const auto& r = out.levels.back();
        ok = ok && r.pass;
        lo = std::min(lo, r.fitted_constant), hi = std::max(hi, r.fitted_constant);
        glo = std::min(glo, r.grad_fitted_constant), ghi = std::max(ghi, r.grad_fitted_constant);
    }
    out.drift = hi / lo;
    out.grad_drift = ghi / glo;
    out.pass = ok && out.drift < 2 && out.grad_drift < 2;
    return out;
}

}  // namespace frackpz
