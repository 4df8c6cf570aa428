#include "frackpz/diagnostics/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frackpz/core/norms.hpp"
#include "frackpz/operators/constants.hpp"
#include "frackpz/operators/fraclap.hpp"
#include "frackpz/solvers/potentials.hpp"
#include "frackpz/solvers/solvers.hpp"

namespace frackpz {

namespace {

DomainSpec refined(const DomainSpec& d) {
    DomainSpec r = d;
    r.grid_n = 2 * d.grid_n - 1;
    return r;
}

}  // namespace

M00Report check_m00(const SourceSpec& f, const ProblemParams& p) {
    p.validate();
    if (!f.nonnegative()) throw std::invalid_argument("(m00) needs a nonnegative source");
    M00Report rep;
    for (const DomainSpec& d : {p.domain, refined(p.domain)}) {
        PotentialBox box(d, p.N);
        rep.grid_ns.push_back(d.grid_n);
        rep.C1.push_back(m00_constant(box.source(f), p.s, p.q));
    }
    const double a = rep.C1[0], b = rep.C1[1];
    if (a == 0 && b == 0) {
        rep.pass = true;
        rep.note = "vacuous: f = 0";
        return rep;
    }
    rep.drift = std::max(a, b) / std::min(a, b);
    rep.pass = std::isfinite(a) && std::isfinite(b) && rep.drift < 2;
    if (!rep.pass) rep.note = "ratio grows under refinement";
    return rep;
}

HardyReport hardy_constant(const ProblemParams& p) {
    p.validate();
    auto gp = Grid::make(p.domain, p.N);
    const Grid& g = *gp;
    const int lo = g.first_interior(), m = g.interior_count();
    // <(-Delta)^s phi, phi> = (a/2) [phi]^2 with [.] the Gagliardo seminorm over R^N x R^N
    const Eigen::MatrixXd& A = FracLapMatrix::get(gp, p.s, BoundaryMode::Zero)->matrix();
    const double a = normalization_constant(p.N, p.s);
    Eigen::MatrixXd Q(m, m);
    for (int i = 0; i < m; ++i) Q.row(i) = (2 / a) * g.measure(lo + i) * A.row(i);
    Q = (0.5 * (Q + Q.transpose())).eval();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    HardyReport rep;
    rep.grid_n = g.size();
    for (int i = 0; i < m; ++i) {
        const double d = g.distance(lo + i);
        if (d >= g.h() * (1 - 1e-9)) {
            M(i, i) = g.measure(lo + i) * std::pow(d, -2 * p.s);
            ++rep.weighted_nodes;
        }
    }
    // M v = mu Q v with Q positive definite; the Hardy constant is 1 / mu_max
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Q, Eigen::EigenvaluesOnly);
    rep.constant = 1 / es.eigenvalues().maxCoeff();
    return rep;
}

std::string to_string(ComparisonVerdict v) {
    switch (v) {
        case ComparisonVerdict::Holds: return "HOLDS";
        case ComparisonVerdict::Violated: return "VIOLATED";
        case ComparisonVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

GridFunction power_lipschitz_bound(const GridFunction& w1, const GridFunction& w2, double q) {
    GridFunction d1 = finite_gradient(w1), d2 = finite_gradient(w2);
    GridFunction b(w1.grid());
    for (int i = 0; i < b.size(); ++i) b[i] = q * std::pow(std::max(d1[i], d2[i]), q - 1);
    return b;
}

ComparisonReport comparison_check(const ComparisonInput& in) {
    const GridPtr& gp = in.w1.grid();
    const Grid& g = *gp;
    GridFunction l1 = in.lap1.size() ? in.lap1 : fraclap(in.w1, in.s);
    GridFunction l2 = in.lap2.size() ? in.lap2 : fraclap(in.w2, in.s);
    GridFunction d1 = in.grad1.size() ? in.grad1 : finite_derivative(in.w1);
    GridFunction d2 = in.grad2.size() ? in.grad2 : finite_derivative(in.w2);
    std::vector<char> skip(g.size(), 0);
    for (int i : in.excluded) skip[i] = 1;
    const double scale = std::max({l1.sup(), l2.sup(), in.g.sup(), 1e-300});
    const double tol = in.tol_rel * scale;
    ComparisonReport rep;
    rep.sub_residual = -kInf;
    rep.super_residual = kInf;
    rep.lipschitz_ok = true;
    for (int i = g.first_interior(); i <= g.last_interior(); ++i) {
        if (skip[i]) continue;
        const double x = g.node(i);
        const double h1 = in.H(x, d1[i]), h2 = in.H(x, d2[i]);
        rep.sub_residual = std::max(rep.sub_residual, l1[i] - h1 - in.g[i]);
        rep.super_residual = std::min(rep.super_residual, l2[i] - h2 - in.g[i]);
        if (std::abs(h1 - h2) > in.b[i] * std::abs(d1[i] - d2[i]) * (1 + 1e-9) + 1e-14 * scale)
            rep.lipschitz_ok = false;
    }
    rep.sub_ok = rep.sub_residual <= tol;
    rep.super_ok = rep.super_residual >= -tol;
    if (!rep.sub_ok) rep.failed.push_back("subsolution inequality");
    if (!rep.super_ok) rep.failed.push_back("supersolution inequality");
    if (!rep.lipschitz_ok) rep.failed.push_back("Lipschitz bound on H");
    rep.min_gap = kInf;
    for (int i = g.first_interior(); i <= g.last_interior(); ++i) rep.min_gap = std::min(rep.min_gap, in.w2[i] - in.w1[i]);
    if (!rep.failed.empty()) {
        rep.verdict = ComparisonVerdict::Inconclusive;
        return rep;
    }
    const double tol_mono = in.tol_mono_rel * std::max(in.w1.sup(), in.w2.sup());
    rep.verdict = rep.min_gap >= -tol_mono ? ComparisonVerdict::Holds : ComparisonVerdict::Violated;
    return rep;
}

RegularityReport regularity_probe(const std::vector<GridFunction>& levels, double predicted_cap,
                                  const std::vector<double>& sigmas) {
    if (levels.size() < 2) throw std::invalid_argument("regularity probe needs at least two refinement levels");
    RegularityReport rep;
    rep.sigmas = sigmas;
    rep.predicted_cap = predicted_cap;
    for (const auto& u : levels) {
        GridFunction du = finite_gradient(u);
        std::vector<double> row;
        for (double sg : sigmas) row.push_back(lp_norm(du, sg));
        rep.norms.push_back(row);
    }
    for (std::size_t k = 0; k < sigmas.size(); ++k) {
        double worst = -kInf;
        for (std::size_t l = 1; l < levels.size(); ++l)
            worst = std::max(worst, rep.norms[l][k] / rep.norms[l - 1][k] - 1);
        rep.growth.push_back(worst);
    }
    for (std::size_t k = 0; k < sigmas.size(); ++k)
        if (rep.growth[k] >= 0.25) {
            rep.threshold = k > 0 ? sigmas[k - 1] : 0.0;
            break;
        }
    rep.within_window = std::isfinite(rep.threshold) && std::isfinite(predicted_cap) &&
                        rep.threshold >= 0.7 * predicted_cap && rep.threshold <= 1.3 * predicted_cap;
    return rep;
}

MarcinkiewiczReport marcinkiewicz_probe(const std::vector<GridFunction>& gradients, double p) {
    MarcinkiewiczReport rep;
    for (const auto& d : gradients) {
        rep.strong.push_back(lp_norm(d, p));
        rep.weak.push_back(weak_lp_norm(d, p));
    }
    return rep;
}

BootstrapReport exponent_bootstrap(int N, double sigma, double s, double r1, int max_steps) {
    const double K = sigma * (2 * s - 1) - N;
    if (!(s > 0.5 && s < 1)) throw std::invalid_argument("s must lie in (1/2, 1)");
    if (!(K > 0)) throw std::invalid_argument("sigma must exceed N / (2s - 1)");
    const double ps = p_star(N, s);
    if (!(r1 > 1 && r1 < ps)) throw std::invalid_argument("r1 must lie in (1, p_*)");
    BootstrapReport rep;
    rep.threshold = sigma * N / K;
    rep.r.push_back(r1);
    for (int k = 0; k < max_steps; ++k) {
        const double r = rep.r.back();
        if (r >= rep.threshold) {
            rep.exited = true;
            break;
        }
        const double den = N * sigma - r * K;
        if (!(den > 0)) {
            rep.exited = true;
            break;
        }
        const double next = N * sigma * r / den;
        if (!(next > r)) rep.increasing = false;
        rep.r.push_back(next);
        rep.steps = k + 1;
    }
    if (!rep.exited && rep.r.back() >= rep.threshold) rep.exited = true;
    return rep;
}

SingularWeightReport singular_weight_study(double alpha, const ProblemParams& p) {
    p.validate();
    if (!(alpha > 1 && alpha < 2 * p.s)) throw std::invalid_argument("alpha must lie in (1, 2s)");
    SingularWeightReport rep;
    rep.alpha = alpha;
    rep.beta_threshold = std::max(p.s / (2 * p.s - alpha), 1.0);
    rep.beta_high = 1.5 * rep.beta_threshold;
    rep.beta_low = 0.5 * rep.beta_threshold;

    auto solve = [&](const GridPtr& g, double n) {
        GridFunction d = boundary_distance(g);
        GridFunction rhs(g);
        for (int i = g->first_interior(); i <= g->last_interior(); ++i)
            rhs[i] = 1 / (std::pow(d[i], alpha) + 1 / n);
        return linear_solve(rhs, p);
    };

    auto g0 = Grid::make(p.domain, p.N);
    GridFunction prev;
    for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
        GridFunction rho = solve(g0, n);
        if (prev.size())
            for (int i = 0; i < rho.size(); ++i)
                if (rho[i] < prev[i] - 1e-10 * rho.sup()) rep.monotone = false;
        rep.n_values.push_back(n);
        rep.sup_norms.push_back(rho.sup());
        prev = rho;
    }
    const std::size_t L = rep.sup_norms.size();
    rep.last_decade_growth = rep.sup_norms[L - 1] / rep.sup_norms[L - 2];
    rep.saturated = rep.last_decade_growth <= 2;

    const DomainSpec d1 = refined(p.domain), d2 = refined(d1);
    for (const DomainSpec& d : {p.domain, d1, d2}) {
        auto g = Grid::make(d, p.N);
        GridFunction rho = solve(g, rep.n_values.back());
        GridFunction hi(g), lo(g);
        for (int i = 0; i < rho.size(); ++i) {
            hi[i] = std::pow(std::max(rho[i], 0.0), rep.beta_high);
            lo[i] = std::pow(std::max(rho[i], 0.0), rep.beta_low);
        }
        rep.grid_ns.push_back(d.grid_n);
        rep.seminorm_high.push_back(gagliardo_seminorm(hi, p.s, true));
        rep.seminorm_low.push_back(gagliardo_seminorm(lo, p.s, true));
    }
    // stable: increments shrink geometrically and the last one is below 10%
    auto stable = [](const std::vector<double>& v, double& growth) {
        const double d1 = v[1] - v[0], d2 = v[2] - v[1];
        growth = d2 / v[1];
        const double ratio = d1 != 0 ? d2 / d1 : 0.0;
        return std::abs(growth) < 0.1 && std::abs(ratio) < 0.95;
    };
    rep.high_stable = stable(rep.seminorm_high, rep.growth_high);
    rep.low_growing = !stable(rep.seminorm_low, rep.growth_low);
    rep.pass = rep.monotone && rep.saturated && rep.high_stable && rep.low_growing;
    return rep;
}

}  // namespace frackpz
