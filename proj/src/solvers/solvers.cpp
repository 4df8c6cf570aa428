#include "frackpz/solvers/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "frackpz/core/norms.hpp"
#include "frackpz/operators/drift.hpp"
#include "frackpz/operators/fraclap.hpp"
#include "frackpz/solvers/potentials.hpp"

namespace frackpz {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "CONVERGED";
        case SolveStatus::Nonconvergent: return "NONCONVERGENT";
        case SolveStatus::InvariantBreach: return "INVARIANT_BREACH";
        case SolveStatus::MonotonicityViolation: return "MONOTONICITY_VIOLATION";
    }
    return "UNKNOWN";
}

GridFunction linear_solve(const GridFunction& g, const ProblemParams& p) {
    if (!g.interior().allFinite()) throw std::invalid_argument("right-hand side is not finite");
    auto A = FracLapMatrix::get(g.grid(), p.s, BoundaryMode::Distance);
    const double rc = A->rcond();
    if (!(rc > 1e-13)) {
        std::ostringstream msg;
        msg << "operator matrix is numerically singular (rcond " << rc << ")";
        throw std::runtime_error(msg.str());
    }
    return A->solve(g);
}

GridFunction equation_residual(const GridFunction& u, const ProblemParams& p, const GridFunction& f) {
    GridFunction r = fraclap(u, p.s);
    GridFunction d = finite_derivative(u);
    const Grid& g = *u.grid();
    for (int i = g.first_interior(); i <= g.last_interior(); ++i)
        r[i] -= std::pow(std::abs(d[i]), p.q) + p.lambda * f[i];
    return r;
}

double truncated_nonlinearity(double xi, double q, double n) {
    const double t = std::pow(std::abs(xi), q);
    return t / (1 + t / n);
}

TruncatedStep truncated_step(const GridFunction& u_prev, double n, const ProblemParams& p, const GridFunction& f,
                             const SolverOptions& opt) {
    if (!(n >= 1)) throw std::invalid_argument("truncation level must be >= 1");
    const GridPtr& g = u_prev.grid();
    const int lo = g->first_interior(), hi = g->last_interior();
    GridFunction base(g);
    for (int i = lo; i <= hi; ++i) base[i] = p.lambda * f[i];
    const double blowup = 1e6 * (1 + linear_solve(base, p).sup());

    TruncatedStep out;
    GridFunction v = u_prev;
    double omega = opt.omega, prev = kInf;
    for (int j = 1; j <= opt.max_inner; ++j) {
        GridFunction d = finite_derivative(v);
        GridFunction rhs(g);
        for (int i = lo; i <= hi; ++i) rhs[i] = truncated_nonlinearity(d[i], p.q, n) + base[i];
        GridFunction vn = linear_solve(rhs, p);
        const double res = (vn.values() - v.values()).cwiseAbs().maxCoeff();
        out.inner_iterations = j;
        out.inner_residual = res;
        if (!vn.finite() || vn.sup() > blowup) {
            out.u = vn;
            return out;
        }
        if (res <= opt.tol_inner * std::max(1.0, vn.sup())) {
            out.u = vn;
            out.converged = true;
            return out;
        }
        if (res > prev) omega *= 0.5;
        prev = res;
        v.values() = (1 - omega) * v.values() + omega * vn.values();
    }
    out.u = v;
    return out;
}

namespace {

void record_residual(SolveReport& rep, const GridFunction& u, const ProblemParams& p, const GridFunction& f) {
    GridFunction r = equation_residual(u, p, f);
    const Grid& g = *u.grid();
    std::vector<double> terms;
    double linf = 0;
    for (int i = g.first_interior(); i <= g.last_interior(); ++i) {
        terms.push_back(std::abs(r[i]) * g.measure(i));
        linf = std::max(linf, std::abs(r[i]));
    }
    rep.residual_l1.push_back(pairwise_sum(terms));
    rep.residual_linf.push_back(linf);
}

bool doubling(const std::vector<double>& norms) {
    if (norms.size() < 6) return false;
    for (std::size_t k = norms.size() - 5; k < norms.size(); ++k)
        if (!(norms[k] >= 2 * norms[k - 1]) || norms[k - 1] <= 0) return false;
    return true;
}

}  // namespace

SolveReport monotone_iteration(const ProblemParams& p, const SourceSpec& f, const Supersolution* w_super,
                               const SolverOptions& opt) {
    p.validate();
    SolveReport rep;
    rep.solver = "monotone";
    rep.regime = classify(p.N, p.s, p.q);
    if (!(p.q < 2 * p.s)) rep.notes.push_back("q >= 2s: the monotone scheme is posed for q < 2s");
    auto g = Grid::make(p.domain, p.N);
    GridFunction fv = f.evaluate(g);
    GridFunction base(g);
    for (int i = g->first_interior(); i <= g->last_interior(); ++i) base[i] = p.lambda * fv[i];
    const double blowup = 1e6 * (1 + linear_solve(base, p).sup());

    GridFunction u(g);
    double n = 1;
    for (int k = 0; k < opt.max_outer; ++k) {
        TruncatedStep st = truncated_step(u, n, p, fv, opt);
        rep.iterations = k + 1;
        rep.metrics["inner_iterations_last"] = st.inner_iterations;
        if (!st.converged) {
            std::ostringstream msg;
            msg << "inner iteration failed at n = " << n << " (residual " << st.inner_residual << ")";
            rep.notes.push_back(msg.str());
            rep.u = st.u;
            rep.status = SolveStatus::Nonconvergent;
            rep.norms_history.push_back(st.u.sup());
            return rep;
        }
        const GridFunction& un = st.u;
        const double tol_mono = opt.tol_mono_rel * std::max(u.sup(), un.sup());
        double dmin = kInf;
        for (int i = g->first_interior(); i <= g->last_interior(); ++i) dmin = std::min(dmin, un[i] - u[i]);
        if (dmin < -tol_mono) {
            rep.monotone_flag = false;
            std::ostringstream msg;
            msg << "monotonicity violated at n = " << n << " by " << -dmin;
            rep.notes.push_back(msg.str());
        }
        if (w_super) {
            double excess = -kInf;
            for (int i = g->first_interior(); i <= g->last_interior(); ++i)
                excess = std::max(excess, un[i] - w_super->w[i]);
            auto it = rep.metrics.find("max_excess_over_supersolution");
            rep.metrics["max_excess_over_supersolution"] =
                it == rep.metrics.end() ? excess : std::max(it->second, excess);
            if (excess > tol_mono) {
                rep.monotone_flag = false;
                rep.notes.push_back("iterate exceeds the supersolution");
            }
        }
        const double diff = (un.values() - u.values()).cwiseAbs().maxCoeff();
        rep.differences.push_back(diff);
        rep.norms_history.push_back(finite_gradient(un).sup());
        record_residual(rep, un, p, fv);
        if (k % std::max(1, opt.snapshot_every) == 0) rep.iterates.push_back(un);
        u = un;
        rep.metrics["n_final"] = n;
        std::vector<double> sups;
        for (const auto& it : rep.iterates) sups.push_back(it.sup());
        if (u.sup() > blowup || doubling(sups)) {
            rep.notes.push_back("iterates grow without bound");
            rep.status = SolveStatus::Nonconvergent;
            rep.u = u;
            return rep;
        }
        if (diff <= opt.tol_outer) {
            rep.converged = true;
            break;
        }
        n *= 2;
    }
    rep.u = u;
    rep.status = rep.converged ? SolveStatus::Converged : SolveStatus::Nonconvergent;
    if (rep.converged && !rep.monotone_flag) rep.status = SolveStatus::MonotonicityViolation;
    rep.metrics["sup_norm"] = u.sup();
    return rep;
}

GainRecursion gain_recursion(double C, double C1, double q, int k_max) {
    if (!(C > 0) || !(C1 >= 0) || !(q > 1)) throw std::invalid_argument("gain recursion needs C > 0, C1 >= 0, q > 1");
    GainRecursion out;
    const double qp = q / (q - 1);
    out.threshold = std::pow(qp, 1 - q) / (q * std::pow(C, q));
    out.threshold_ok = C1 <= out.threshold * (1 + 1e-12);
    out.a.push_back(C);
    for (int k = 1; k < k_max; ++k) {
        double next = C * (C1 * std::pow(out.a.back(), q) + 1);
        out.a.push_back(next);
        if (!std::isfinite(next) || next > 1e300) break;
    }
    if (C1 == 0) {
        out.limit = C;
        return out;
    }
    auto phi = [&](double x) { return C * (C1 * std::pow(x, q) + 1) - x; };
    // phi is convex with minimum at xm; the smaller root lies in [C, xm]
    const double xm = std::pow(1 / (C * C1 * q), 1 / (q - 1));
    const double pm = phi(xm);
    if (out.threshold_ok && std::abs(pm) <= 1e-13 * xm) {
        out.limit = xm;
    } else if (out.threshold_ok) {
        double lo = C, hi = xm;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) > 0 ? lo : hi) = mid;
        }
        out.limit = 0.5 * (lo + hi);
    } else {
        out.limit = kInf;
    }
    if (!out.threshold_ok) {
        bool growing = true;
        for (std::size_t k = 1; k < out.a.size(); ++k)
            if (!(out.a[k] > out.a[k - 1])) growing = false;
        out.diverged = growing && out.a.back() > C * qp;
    }
    return out;
}

SolveReport picard_potential(const ProblemParams& p, const SourceSpec& f, double C1, const SolverOptions& opt) {
    p.validate();
    if (p.domain.kind != DomainKind::Ball || p.N < 2)
        throw std::invalid_argument("the potential iteration needs a ball with N >= 2 (I_{2s} requires 2s < N)");
    SolveReport rep;
    rep.solver = "picard";
    rep.regime = classify(p.N, p.s, p.q);
    PotentialBox box(p.domain, p.N);
    GridFunction fb = box.source(f);
    GridFunction lf = fb;
    lf.values() *= p.lambda;
    const double a2s = 2 * p.s, a1 = 2 * p.s - 1;
    GridFunction P = riesz_apply(lf, a1);
    if (C1 < 0) C1 = m00_constant(fb, p.s, p.q);
    rep.metrics["C1"] = C1;

    std::vector<GridFunction> us;
    GridFunction u(box.grid());
    double Cmax = 0;
    std::vector<double> sups;
    for (int k = 0; k < opt.max_iter; ++k) {
        GridFunction d = finite_derivative(u);
        GridFunction gk = lf;
        for (int i = 0; i < gk.size(); ++i) gk[i] += std::pow(std::abs(d[i]), p.q);
        GridFunction un = riesz_apply(gk, a2s, true);
        GridFunction J = riesz_apply(gk, a1);
        GridFunction dn = finite_derivative(un);
        for (int i = 0; i < un.size(); ++i)
            if (J[i] > 0) Cmax = std::max(Cmax, std::abs(dn[i]) / J[i]);
        const double diff = (un.values() - u.values()).cwiseAbs().maxCoeff();
        rep.differences.push_back(diff);
        us.push_back(un);
        u = un;
        rep.iterations = k + 1;
        sups.push_back(u.sup());
        if (!u.finite() || doubling(sups)) {
            rep.notes.push_back("potential iterates grow without bound");
            rep.status = SolveStatus::Nonconvergent;
            break;
        }
        if (diff <= std::max(opt.tol_outer * 1e-6, 1e-13) * std::max(u.sup(), 1e-300) || u.sup() == 0) {
            rep.converged = true;
            break;
        }
    }
    if (rep.converged) rep.status = SolveStatus::Converged;
    rep.metrics["C"] = Cmax;

    // envelope |du_k| <= a_k I_{2s-1}(lambda f)
    GainRecursion gr = gain_recursion(Cmax > 0 ? Cmax : 1.0, std::pow(p.lambda, p.q - 1) * C1, p.q,
                                      static_cast<int>(us.size()) + 1);
    rep.metrics["threshold_ok"] = gr.threshold_ok;
    rep.metrics["gain_limit"] = gr.limit;
    bool envelope = true;
    double worst = 0;
    for (std::size_t k = 0; k < us.size(); ++k) {
        GridFunction dk = finite_derivative(us[k]);
        double ratio = 0;
        for (int i = 0; i < dk.size(); ++i)
            if (P[i] > 0) ratio = std::max(ratio, std::abs(dk[i]) / P[i]);
        const double ak = k < gr.a.size() ? gr.a[k] : gr.a.back();
        rep.gain_history.push_back(ak);
        rep.norms_history.push_back(ratio);
        worst = std::max(worst, ratio / ak);
        if (ratio > ak * (1 + 1e-9)) envelope = false;
    }
    rep.metrics["envelope_ok"] = envelope;
    rep.metrics["envelope_worst_ratio"] = worst;

    // geometric decay of consecutive differences
    std::vector<double> xs, ys;
    const double floor = 1e-12 * std::max(u.sup(), 1e-300);
    for (std::size_t k = 1; k < rep.differences.size(); ++k)
        if (rep.differences[k] > floor) {
            xs.push_back(static_cast<double>(k));
            ys.push_back(std::log(rep.differences[k]));
        }
    if (xs.size() >= 3) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sx += xs[k], sy += ys[k], sxx += xs[k] * xs[k], sxy += xs[k] * ys[k], syy += ys[k] * ys[k];
        }
        const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double vy = n * syy - sy * sy;
        const double r2 = vy > 0 ? (n * sxy - sx * sy) * (n * sxy - sx * sy) / ((n * sxx - sx * sx) * vy) : 1.0;
        rep.metrics["cauchy_ratio"] = std::exp(b);
        rep.metrics["cauchy_r2"] = r2;
    }
    for (std::size_t k = 0; k < us.size(); k += std::max(1, opt.snapshot_every)) rep.iterates.push_back(box.restrict(us[k]));
    rep.u = box.restrict(u);
    auto g = rep.u.grid();
    record_residual(rep, rep.u, p, f.evaluate(g));
    rep.metrics["sup_norm"] = rep.u.sup();
    return rep;
}

LambdaStar schauder_lambda_star(double e, double norm_f_m, double C0) {
    if (!(C0 > 0)) throw std::invalid_argument("C0 must be positive");
    if (!(e > 0 && e < 1)) throw std::invalid_argument("exponent must lie in (0, 1)");
    if (!(norm_f_m > 0)) throw std::invalid_argument("||f|| must be positive");
    LambdaStar out;
    out.exponent = e;
    out.l = std::pow(e / C0, 1 / (1 - e));
    out.lambda_star = (std::pow(out.l, e) - C0 * out.l) / (C0 * norm_f_m);
    return out;
}

LambdaStar schauder_lambda_star(const ProblemParams& p, double norm_f_m, double C0) {
    Regime r = classify(p.N, p.s, p.q);
    if (r != Regime::Critical && r != Regime::Supercritical)
        throw std::invalid_argument("the Schauder construction needs q >= 2s");
    return schauder_lambda_star(r == Regime::Critical ? 1 / (2 * p.s) : 1 / p.q, norm_f_m, C0);
}

double schauder_level(double e, double norm_f_m, double C0, double lambda) {
    LambdaStar ls = schauder_lambda_star(e, norm_f_m, C0);
    if (lambda > ls.lambda_star) return std::nan("");
    auto psi = [&](double l) { return std::pow(l, e) - C0 * (l + lambda * norm_f_m); };
    if (lambda <= 0) return 0;
    double lo = 0, hi = ls.l;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (psi(mid) < 0 ? lo : hi) = mid;
    }
    return hi;
}

namespace {

double q_effective(const ProblemParams& p) {
    return classify(p.N, p.s, p.q) == Regime::Critical ? 2 * p.s : p.q;
}

}  // namespace

SolveReport schauder_iterate(const ProblemParams& p, const SourceSpec& f, double l, double lambda,
                             const SolverOptions& opt) {
    p.validate();
    Regime reg = classify(p.N, p.s, p.q);
    if (reg != Regime::Critical && reg != Regime::Supercritical)
        throw std::invalid_argument("the Schauder iteration needs q >= 2s");
    ProblemParams pp = p;
    pp.lambda = lambda;
    SolveReport rep;
    rep.solver = "schauder";
    rep.regime = reg;
    const double qe = q_effective(p);
    const double sigma = qe * p.m;
    const double bound = std::pow(l, 1 / qe) * (1 + 1e-6);
    rep.metrics["q_eff"] = qe;
    rep.metrics["set_bound"] = bound;
    auto g = Grid::make(p.domain, p.N);
    GridFunction fv = f.evaluate(g);
    GridFunction base(g);
    for (int i = g->first_interior(); i <= g->last_interior(); ++i) base[i] = lambda * fv[i];
    const double blowup = 1e6 * (1 + linear_solve(base, pp).sup());
    GridFunction u(g);
    std::vector<double> sups;
    bool breach = false;
    for (int j = 0; j < opt.max_iter; ++j) {
        GridFunction d = finite_derivative(u);
        GridFunction rhs = base;
        for (int i = g->first_interior(); i <= g->last_interior(); ++i) rhs[i] += std::pow(std::abs(d[i]), qe);
        GridFunction un = linear_solve(rhs, pp);
        GridFunction dn = finite_derivative(un);
        const double normE = lp_norm(finite_gradient(un), sigma);
        rep.norms_history.push_back(normE);
        if (normE > bound) breach = true;
        GridFunction du(g, un.values() - u.values());
        GridFunction ddu(g, dn.values() - d.values());
        const double diff = lp_norm(du, 1) + lp_norm(finite_gradient(du), 1);
        rep.differences.push_back(diff);
        for (int i = g->first_interior(); i <= g->last_interior(); ++i)
            if (un[i] < u[i] - opt.tol_mono_rel * std::max(un.sup(), u.sup())) rep.monotone_flag = false;
        u = un;
        rep.iterations = j + 1;
        if (j % std::max(1, opt.snapshot_every) == 0) rep.iterates.push_back(u);
        ProblemParams rp = pp;
        rp.q = qe;
        record_residual(rep, u, rp, fv);
        sups.push_back(u.sup());
        if (!u.finite() || u.sup() > blowup || doubling(sups)) {
            rep.notes.push_back("iterates grow without bound");
            break;
        }
        if (diff <= opt.tol_outer) {
            rep.converged = true;
            break;
        }
    }
    rep.u = u;
    rep.metrics["set_invariant_ok"] = !breach;
    // a nondecreasing sequence from zero is the signature of the minimal solution
    rep.metrics["minimal_from_zero"] = rep.monotone_flag;
    if (breach) {
        rep.status = SolveStatus::InvariantBreach;
        rep.notes.push_back("set-E bound violated: C0 may be underestimated");
    } else {
        rep.status = rep.converged ? SolveStatus::Converged : SolveStatus::Nonconvergent;
    }
    rep.metrics["sup_norm"] = u.sup();
    return rep;
}

C0Measurement measure_C0(const ProblemParams& p, unsigned seed) {
    p.validate();
    auto g = Grid::make(p.domain, p.N);
    const double qe = q_effective(p);
    const double sigma = qe * p.m;
    C0Measurement out;
    auto probe = [&](const std::string& name, const GridFunction& data) {
        const double den = lp_norm(data, p.m);
        if (!(den > 0)) return;
        const double r = lp_norm(finite_gradient(linear_solve(data, p)), sigma) / den;
        out.ratios.emplace_back(name, r);
        if (r > out.C0) {
            out.C0 = r;
            out.probe = name;
        }
    };
    const double R = p.domain.kind == DomainKind::Ball ? p.domain.R : 0.5 * (p.domain.b - p.domain.a);
    const double c = p.domain.kind == DomainKind::Ball ? 0.0 : 0.5 * (p.domain.a + p.domain.b);
    for (int k = 1; k <= 4; ++k) {
        const double rad = 0.25 * k * R;
        SourceSpec ind = p.domain.kind == DomainKind::Ball ? SourceSpec::ball_indicator(rad)
                                                           : SourceSpec::indicator(c - rad, c + rad);
        probe("indicator_" + std::to_string(k), ind.evaluate(g));
    }
    if (std::isfinite(p.m))
        for (double fr : {0.25, 0.5}) {
            SourceSpec pw = SourceSpec::power(fr * p.N / p.m);
            if (p.domain.kind == DomainKind::Ball) probe("power_" + std::to_string(fr), pw.evaluate(g));
        }
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 3; ++k) {
        GridFunction data(g);
        for (int i = g->first_interior(); i <= g->last_interior(); ++i)
            data[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        probe("random_" + std::to_string(k), data);
    }
    return out;
}

DriftSolve drift_solve(const GridFunction& B, const GridFunction& f, const ProblemParams& p) {
    const GridPtr& g = f.grid();
    Eigen::MatrixXd M = drift_matrix(g, p.s, B);
    DriftSolve out;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    out.kernel_gap = svd.singularValues().minCoeff();
    out.near_singular = out.kernel_gap < 1e-10;
    Eigen::VectorXd x = M.partialPivLu().solve(f.interior());
    out.w = GridFunction::from_interior(g, x);
    return out;
}

SolveReport solve_auto(const ProblemParams& p, const SourceSpec& f, const SolverOptions& opt) {
    p.validate();
    Regime r = classify(p.N, p.s, p.q);
    if (r == Regime::Subcritical || r == Regime::SubcriticalLow) {
        if (p.domain.kind == DomainKind::Ball && p.N > 2 * p.s && p.lambda > 0) {
            BumpChoice bc = choose_bump(p, f);
            SolveReport rep = monotone_iteration(p, f, &bc.w, opt);
            rep.metrics["lambda_admissible"] = bc.lambda_admissible;
            rep.metrics["bump_amplitude"] = bc.spec.C;
            rep.metrics["bump_alpha"] = bc.spec.alpha;
            if (p.lambda > bc.lambda_admissible)
                rep.notes.push_back("lambda exceeds the bump supersolution's admissible range");
            return rep;
        }
        return monotone_iteration(p, f, nullptr, opt);
    }
    auto g = Grid::make(p.domain, p.N);
    C0Measurement c0 = measure_C0(p);
    const double nf = lp_norm(f.evaluate(g), p.m);
    SolveReport rep;
    if (!(nf > 0) || p.lambda == 0) {
        rep = schauder_iterate(p, f, 0.0, p.lambda, opt);
    } else {
        LambdaStar ls = schauder_lambda_star(p, nf, c0.C0);
        double l = schauder_level(ls.exponent, nf, c0.C0, p.lambda);
        if (std::isnan(l)) l = ls.l;
        rep = schauder_iterate(p, f, l, p.lambda, opt);
        rep.metrics["lambda_star"] = ls.lambda_star;
        rep.metrics["l"] = l;
    }
    rep.metrics["C0"] = c0.C0;
    rep.metrics["norm_f_m"] = nf;
    return rep;
}

}  // namespace frackpz
