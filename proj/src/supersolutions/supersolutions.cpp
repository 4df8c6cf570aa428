#include "frackpz/supersolutions/supersolutions.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <stdexcept>

#include "frackpz/core/norms.hpp"
#include "frackpz/core/shell_kernel.hpp"
#include "frackpz/operators/constants.hpp"
#include "frackpz/operators/radial_reduced.hpp"

namespace frackpz {

double power_alpha(double s, double q) {
    if (!(q > 1)) throw std::invalid_argument("power supersolutions need q > 1");
    if (!(q < 2 * s)) throw std::invalid_argument("power supersolutions need q < 2s");
    return (2 * s - q) / (q - 1);
}

double power_eigenvalue(int N, double s, double alpha) {
    if (!(alpha > 0 && alpha < N - 2 * s))
        throw std::invalid_argument("power exponent must lie in (0, N - 2s)");
    return std::pow(4.0, s) * std::tgamma(0.5 * (alpha + 2 * s)) * std::tgamma(0.5 * (N - alpha)) /
           (std::tgamma(0.5 * alpha) * std::tgamma(0.5 * (N - alpha - 2 * s)));
}

namespace {

/// a_{N,s} int_R^inf rho^{N-1-alpha} K(r, rho) d rho: what truncating |x|^{-alpha} at R removes.
double power_exterior(int N, double s, double alpha, double r, double R) {
    const double beta = N + 2 * s, d = R - r;
    thread_local boost::math::quadrature::exp_sinh<double> es;
    double v = es.integrate(
        [&](double t) {
            if (t > 200) return 0.0;
            double g = d * std::exp(t), rho = r + g;
            return shell_kernel(N, beta, r, rho) * std::pow(rho, N - 1 - alpha) * g;
        },
        1e-11);
    return normalization_constant(N, s) * v;
}

GridFunction power_samples(const GridPtr& g, double alpha, double A) {
    const int N = g->dim();
    const double h = g->h();
    return sample(g, [&](double r) {
        // cell average at the origin
        return r == 0 ? A * N / (N - alpha) * std::pow(0.5 * h, -alpha) : A * std::pow(r, -alpha);
    });
}

}  // namespace

PowerEigenCheck power_eigenvalue_check(int N, double s, double alpha, int grid_n) {
    PowerEigenCheck out;
    out.closed_form = power_eigenvalue(N, s, alpha);
    auto g = Grid::make(DomainSpec::ball(1.0, grid_n), N);
    GridFunction u = power_samples(g, alpha, 1.0);
    GridFunction L = FracLapMatrix::get(g, s, BoundaryMode::Open)->apply(u);
    double lo = kInf, hi = -kInf, sum = 0;
    int cnt = 0;
    for (int i = 0; i < g->size(); ++i) {
        const double r = g->node(i);
        if (r < 0.3 || r > 0.6) continue;
        double ratio = (L[i] - power_exterior(N, s, alpha, r, 1.0)) * std::pow(r, alpha + 2 * s);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        sum += ratio;
        ++cnt;
    }
    out.numeric = sum / cnt;
    out.spread = (hi - lo) / out.closed_form;
    out.rel_error = std::max(std::abs(lo - out.closed_form), std::abs(hi - out.closed_form)) / out.closed_form;
    return out;
}

double power_amplitude_max(int N, double s, double q) {
    if (!(q > p_star(N, s))) throw std::invalid_argument("power supersolutions need q > p_*");
    const double alpha = power_alpha(s, q);
    return std::pow(power_eigenvalue(N, s, alpha) / std::pow(alpha, q), 1 / (q - 1));
}

PowerSupersolSpec PowerSupersolSpec::make(int N, double s, double q, double A) {
    if (!(A > 0)) throw std::invalid_argument("amplitude must be positive");
    PowerSupersolSpec p;
    p.alpha = power_alpha(s, q);
    p.C = power_eigenvalue(N, s, p.alpha);
    p.A = A;
    p.admissible = std::pow(p.alpha, q) * std::pow(A, q - 1) <= p.C;
    return p;
}

std::pair<double, double> bump_thresholds(int N, double s, double alpha) {
    if (!(N > 2 * s)) throw std::invalid_argument("bump thresholds need N > 2s");
    if (!(alpha > 1 && alpha < 2 * s)) throw std::invalid_argument("bump exponent must lie in (1, 2s)");
    const double top = N + alpha - 2 * s;
    const double sigma0 = std::pow(top / (N - 2 * s), 1 / alpha);
    const double r0 = std::pow(top / (top + std::pow(sigma0, 2 * s - N)), 1 / alpha);
    return {sigma0, r0};
}

BumpProfile bump_F_profile(int N, double s, double alpha, int count) {
    if (count < 2) throw std::invalid_argument("profile needs at least 2 radii");
    const double r0 = bump_thresholds(N, s, alpha).second;
    auto w = [alpha](double r) { return r < 1 ? 1 - std::pow(r, alpha) : 0.0; };
    BumpProfile out;
    out.r.resize(count);
    out.F.resize(count);
    for (int k = 0; k < count; ++k) {
        const double r = r0 * (k + 1) / count;
        out.r[k] = r;
        out.F[k] = std::pow(r, 2 * s - alpha) * fraclap_radial_reduced(w, N, s, r, {1.0});
    }
    out.F_min = *std::min_element(out.F.begin(), out.F.end());
    out.decreasing = true;
    for (int k = 0; k + 1 < count; ++k)
        if (!(out.F[k + 1] < out.F[k])) out.decreasing = false;
    return out;
}

RadialBumpSpec RadialBumpSpec::make(int N, double s, double alpha, double C, int profile_points) {
    if (!(C > 0)) throw std::invalid_argument("amplitude must be positive");
    RadialBumpSpec b;
    b.alpha = alpha;
    b.C = C;
    std::tie(b.sigma0, b.r0) = bump_thresholds(N, s, alpha);
    b.F_floor = bump_F_profile(N, s, alpha, profile_points).F_min;
    return b;
}

Supersolution make_candidate(const GridFunction& w, double s, BoundaryMode mode) {
    Supersolution out;
    out.family = "grid";
    out.w = w;
    out.lap = fraclap(w, s, mode);
    out.grad = finite_derivative(w);
    out.excluded.assign(w.size(), 0);
    return out;
}

Supersolution bump_supersolution(const ProblemParams& p, const RadialBumpSpec& b) {
    if (p.domain.kind != DomainKind::Ball) throw std::invalid_argument("bump supersolutions live on balls");
    auto g = Grid::make(p.domain, p.N);
    const double h = g->h(), R = p.domain.R;
    const int n_ext = static_cast<int>(std::ceil(R / b.r0 / h - 1e-9)) + 1;
    const double rho = (n_ext - 1) * h;
    auto ge = Grid::make(DomainSpec::ball(rho, n_ext), p.N);
    GridFunction we = sample(ge, [&](double r) { return b.C * (1 - std::pow(r / rho, b.alpha)); });
    GridFunction le = FracLapMatrix::get(ge, p.s, BoundaryMode::Zero)->apply(we);
    GridFunction de = finite_derivative(we);
    Supersolution out;
    out.family = "bump";
    out.w = GridFunction(g);
    out.lap = GridFunction(g);
    out.grad = GridFunction(g);
    out.excluded.assign(g->size(), 0);
    for (int i = 0; i < g->size(); ++i) {
        out.w[i] = we[i];
        out.lap[i] = le[i];
        out.grad[i] = de[i];
        if (rho - g->node(i) < 2 * h) out.excluded[i] = 1;
    }
    return out;
}

Supersolution power_supersolution(const ProblemParams& p, const PowerSupersolSpec& ps) {
    if (p.domain.kind != DomainKind::Ball) throw std::invalid_argument("power supersolutions live on balls");
    auto g = Grid::make(p.domain, p.N);
    Supersolution out;
    out.family = "power";
    out.w = power_samples(g, ps.alpha, ps.A);
    out.lap = FracLapMatrix::get(g, p.s, BoundaryMode::Open)->apply(out.w);
    out.grad = finite_derivative(out.w);
    out.excluded.assign(g->size(), 0);
    for (int i = 0; i < g->size(); ++i)
        if (g->node(i) <= 2 * g->h() * (1 + 1e-9)) out.excluded[i] = 1;
    return out;
}

namespace {

struct Pieces {
    std::vector<int> nodes;
    std::vector<double> lap, grad_q, f;
    double lap_max = 0;
};

Pieces gather(const Supersolution& w, const ProblemParams& p, const SourceSpec& f) {
    const Grid& g = *w.w.grid();
    GridFunction fv = f.evaluate(w.w.grid());
    Pieces out;
    for (int i = g.first_interior(); i <= g.last_interior(); ++i) {
        if (w.excluded[i]) continue;
        out.nodes.push_back(i);
        out.lap.push_back(w.lap[i]);
        out.grad_q.push_back(std::pow(std::abs(w.grad[i]), p.q));
        out.f.push_back(fv[i]);
        out.lap_max = std::max(out.lap_max, std::abs(w.lap[i]));
    }
    return out;
}

}  // namespace

SupersolutionCheck verify_supersolution(const Supersolution& w, const ProblemParams& p, const SourceSpec& f,
                                        double tol_rel) {
    const Grid& g = *w.w.grid();
    GridFunction fv = f.evaluate(w.w.grid());
    SupersolutionCheck out;
    out.residual = GridFunction(w.w.grid());
    double lap_max = 0;
    for (int i = g.first_interior(); i <= g.last_interior(); ++i) {
        out.residual[i] = w.lap[i] - std::pow(std::abs(w.grad[i]), p.q) - p.lambda * fv[i];
        if (!w.excluded[i]) lap_max = std::max(lap_max, std::abs(w.lap[i]));
    }
    out.tol = tol_rel * lap_max;
    out.worst_value = kInf;
    for (int i = g.first_interior(); i <= g.last_interior(); ++i) {
        if (w.excluded[i]) {
            ++out.excluded;
            continue;
        }
        if (out.residual[i] < out.worst_value) {
            out.worst_value = out.residual[i];
            out.worst_node = i;
        }
    }
    out.pass = out.worst_node >= 0 && out.worst_value >= -out.tol && out.residual.finite();
    return out;
}

SupersolutionCheck verify_supersolution(const GridFunction& w, const ProblemParams& p, const SourceSpec& f,
                                        double tol_rel) {
    return verify_supersolution(make_candidate(w, p.s), p, f, tol_rel);
}

double lambda_admissible(const Supersolution& w, const ProblemParams& p, const SourceSpec& f, double lambda_hi,
                         double tol_rel) {
    ProblemParams q = p;
    auto ok = [&](double lam) {
        q.lambda = lam;
        return verify_supersolution(w, q, f, tol_rel).pass;
    };
    if (!ok(0)) return 0;
    if (ok(lambda_hi)) return lambda_hi;
    double lo = 0, hi = lambda_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

BumpChoice choose_bump(const ProblemParams& p, const SourceSpec& f, double alpha) {
    if (alpha == 0) alpha = 0.5 * (1 + 2 * p.s);
    BumpChoice out;
    out.spec = RadialBumpSpec::make(p.N, p.s, alpha, 1.0);
    Supersolution unit = bump_supersolution(p, out.spec);
    Pieces pc = gather(unit, p, f);
    // lambda(C) = min_i (C L_i - C^q G_i) / f_i is concave in C; the strict form
    // keeps the optimum inside the verification tolerance
    auto lam = [&](double C) {
        double best = kInf;
        for (std::size_t k = 0; k < pc.nodes.size(); ++k) {
            double v = C * pc.lap[k] - std::pow(C, p.q) * pc.grad_q[k];
            if (pc.f[k] > 0) best = std::min(best, v / pc.f[k]);
            else if (v < 0) return -kInf;
        }
        return best;
    };
    double bestC = 1, bestL = lam(1);
    for (double e = -12; e <= 12; e += 0.25) {
        double C = std::pow(10.0, e), L = lam(C);
        if (L > bestL) bestL = L, bestC = C;
    }
    double a = bestC / std::pow(10.0, 0.25), b = bestC * std::pow(10.0, 0.25);
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    for (int it = 0; it < 100; ++it) {
        double c = b - gr * (b - a), d = a + gr * (b - a);
        if (lam(c) > lam(d)) b = d;
        else a = c;
    }
    out.spec.C = 0.5 * (a + b);
    out.w = unit;
    out.w.w.values() *= out.spec.C;
    out.w.lap.values() *= out.spec.C;
    out.w.grad.values() *= out.spec.C;
    double hi = std::max(lam(out.spec.C), 0.0) * 2 + 1e-300;
    out.lambda_admissible = lambda_admissible(out.w, p, f, hi);
    return out;
}

}  // namespace frackpz
