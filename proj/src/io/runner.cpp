#include "frackpz/io/runner.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <boost/version.hpp>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>

#include "frackpz/core/norms.hpp"
#include "frackpz/operators/constants.hpp"

namespace frackpz {

void Artifacts::write(const std::string& dir, const std::string& report_name) const {
    std::filesystem::create_directories(dir);
    write_json((std::filesystem::path(dir) / report_name).string(), report);
    for (const auto& [name, table] : tables) table.write((std::filesystem::path(dir) / name).string());
}

namespace {

SolveReport run_schauder(const ProblemParams& p, const SourceSpec& f, const SolverOptions& opt) {
    auto g = Grid::make(p.domain, p.N);
    const double nf = lp_norm(f.evaluate(g), p.m);
    if (!(nf > 0) || p.lambda == 0) return schauder_iterate(p, f, 0.0, p.lambda, opt);
    C0Measurement c0 = measure_C0(p);
    LambdaStar ls = schauder_lambda_star(p, nf, c0.C0);
    double l = schauder_level(ls.exponent, nf, c0.C0, p.lambda);
    SolveReport rep = schauder_iterate(p, f, std::isnan(l) ? ls.l : l, p.lambda, opt);
    rep.metrics["C0"] = c0.C0;
    rep.metrics["lambda_star"] = ls.lambda_star;
    rep.metrics["l"] = std::isnan(l) ? ls.l : l;
    rep.metrics["norm_f_m"] = nf;
    return rep;
}

}  // namespace

SolveReport run_solver(const RunConfig& cfg) {
    const ProblemParams& p = cfg.params;
    if (cfg.solver == "auto") return solve_auto(p, cfg.source, cfg.options);
    if (cfg.solver == "picard") return picard_potential(p, cfg.source, cfg.C1, cfg.options);
    if (cfg.solver == "schauder") return run_schauder(p, cfg.source, cfg.options);
    if (p.domain.kind == DomainKind::Ball && p.N > 2 * p.s && p.lambda > 0 && p.q < 2 * p.s) {
        BumpChoice bc = choose_bump(p, cfg.source);
        SolveReport rep = monotone_iteration(p, cfg.source, &bc.w, cfg.options);
        rep.metrics["lambda_admissible"] = bc.lambda_admissible;
        return rep;
    }
    return monotone_iteration(p, cfg.source, nullptr, cfg.options);
}

SolveOutcome cmd_solve(const RunConfig& cfg) {
    SolveOutcome out;
    try {
        out.report = run_solver(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    } catch (const std::runtime_error& e) {
        out.report.solver = cfg.solver;
        out.report.status = SolveStatus::Nonconvergent;
        out.report.regime = classify(cfg.params.N, cfg.params.s, cfg.params.q);
        out.report.notes.push_back(e.what());
    }
    const SolveReport& r = out.report;
    out.artifacts.report = Json{{"command", "solve"},
                                {"config", to_json(cfg)},
                                {"exponents", to_json(critical_exponents(cfg.params))},
                                {"report", to_json(r)}};
    out.artifacts.tables.emplace_back("solution.csv", solution_table(r, cfg.params, cfg.source));
    out.artifacts.tables.emplace_back("iterates.csv", iterate_table(r));
    const bool ok = r.status == SolveStatus::Converged || r.status == SolveStatus::MonotonicityViolation;
    out.exit_code = ok ? kExitOk : kExitNonconvergent;
    return out;
}

const std::vector<std::string> kVerifyTargets = {"greenbounds", "m00",           "hardy",    "supersolution",
                                                 "comparison",  "singularweight", "bootstrap"};

namespace {

void need_ball(const RunConfig& cfg, const std::string& what) {
    if (cfg.params.domain.kind != DomainKind::Ball) throw ConfigError(0, what + " needs domain.kind = ball");
}

CsvTable residual_table(const Supersolution& w, const SupersolutionCheck& c, double q) {
    CsvTable t({"x", "w", "fraclap", "gradterm", "residual", "excluded"});
    const Grid& g = *w.w.grid();
    for (int i = 0; i < g.size(); ++i)
        t.add({g.node(i), w.w[i], w.lap[i], std::pow(std::abs(w.grad[i]), q), c.residual[i],
               i < static_cast<int>(w.excluded.size()) ? static_cast<double>(w.excluded[i]) : 0.0});
    return t;
}

}  // namespace

VerifyOutcome cmd_verify(const RunConfig& cfg, const std::string& target) {
    if (std::find(kVerifyTargets.begin(), kVerifyTargets.end(), target) == kVerifyTargets.end())
        throw ConfigError(0, "unknown verify target '" + target + "'");
    const ProblemParams& p = cfg.params;
    VerifyOutcome out;
    Json body;
    try {
        if (target == "greenbounds") {
            need_ball(cfg, "greenbounds");
            GreenRefinement r = check_green_bounds_refinement(p.N, p.s, {p.domain.grid_n, 2 * p.domain.grid_n - 1},
                                                              cfg.verify.samples, cfg.seed);
            out.pass = r.pass;
            body = to_json(r);
            out.artifacts.tables.emplace_back("bounds.csv", bound_table(r.levels.back()));
            out.summary = "fitted constant drift " + format_double(r.drift) + ", gradient drift " + format_double(r.grad_drift);
        } else if (target == "m00") {
            M00Report r = check_m00(cfg.source, p);
            out.pass = r.pass;
            body = to_json(r);
            out.summary = "C1 = " + format_double(r.C1.back());
        } else if (target == "hardy") {
            HardyReport a = hardy_constant(p);
            ProblemParams pf = p;
            pf.domain.grid_n = 2 * p.domain.grid_n - 1;
            HardyReport b = hardy_constant(pf);
            const double drift = std::max(a.constant, b.constant) / std::min(a.constant, b.constant);
            out.pass = a.constant > 0 && b.constant > 0 && std::isfinite(drift) && drift < 2;
            body = Json{{"levels", Json::array({to_json(a), to_json(b)})}, {"drift", drift}, {"pass", out.pass}};
            out.summary = "Hardy constant " + format_double(b.constant);
        } else if (target == "supersolution") {
            need_ball(cfg, "supersolution");
            Supersolution w;
            Json spec;
            if (cfg.verify.family == "power") {
                const double A = cfg.verify.amplitude > 0 ? cfg.verify.amplitude : 0.5 * power_amplitude_max(p.N, p.s, p.q);
                PowerSupersolSpec ps = PowerSupersolSpec::make(p.N, p.s, p.q, A);
                w = power_supersolution(p, ps);
                spec = Json{{"family", "power"}, {"alpha", ps.alpha}, {"A", ps.A}, {"C", ps.C}, {"admissible", ps.admissible}};
            } else {
                BumpChoice bc = choose_bump(p, cfg.source, cfg.verify.alpha);
                w = bc.w;
                spec = Json{{"family", "bump"},
                            {"alpha", bc.spec.alpha},
                            {"C", bc.spec.C},
                            {"sigma0", bc.spec.sigma0},
                            {"r0", bc.spec.r0},
                            {"lambda_admissible", bc.lambda_admissible}};
            }
            SupersolutionCheck c = verify_supersolution(w, p, cfg.source);
            out.pass = c.pass;
            body = Json{{"spec", spec}, {"check", to_json(c)}};
            out.artifacts.tables.emplace_back("residual.csv", residual_table(w, c, p.q));
            out.summary = c.pass ? "supersolution" : "residual negative at node " + std::to_string(c.worst_node);
        } else if (target == "comparison") {
            need_ball(cfg, "comparison");
            if (!(p.N > 2 * p.s && p.q < 2 * p.s)) throw ConfigError(0, "comparison needs N > 2s and q < 2s");
            BumpChoice bc = choose_bump(p, cfg.source, cfg.verify.alpha);
            SolveReport sol = monotone_iteration(p, cfg.source, &bc.w, cfg.options);
            ComparisonInput in;
            in.w1 = sol.u;
            in.w2 = bc.w.w;
            in.lap2 = bc.w.lap;
            in.grad2 = bc.w.grad;
            in.s = p.s;
            const double q = p.q;
            in.H = [q](double, double xi) { return std::pow(std::abs(xi), q); };
            in.b = GridFunction(sol.u.grid());
            GridFunction d1 = finite_gradient(in.w1);
            for (int i = 0; i < in.b.size(); ++i)
                in.b[i] = q * std::pow(std::max(d1[i], std::abs(in.grad2[i])), q - 1);
            in.g = cfg.source.evaluate(sol.u.grid());
            in.g.values() *= p.lambda;
            for (int i = 0; i < static_cast<int>(bc.w.excluded.size()); ++i)
                if (bc.w.excluded[i]) in.excluded.push_back(i);
            ComparisonReport r = comparison_check(in);
            out.pass = r.verdict == ComparisonVerdict::Holds;
            body = to_json(r);
            body["solver_status"] = to_string(sol.status);
            out.summary = to_string(r.verdict);
        } else if (target == "singularweight") {
            const double alpha = cfg.verify.alpha > 0 ? cfg.verify.alpha : 0.5 * (1 + 2 * p.s);
            SingularWeightReport r = singular_weight_study(alpha, p);
            out.pass = r.pass;
            body = to_json(r);
            out.summary = "sup norm growth over the last decade " + format_double(r.last_decade_growth);
        } else {
            const double r1 = cfg.verify.r1 > 0 ? cfg.verify.r1 : 0.5 * (1 + p_star(p.N, p.s));
            BootstrapReport r = exponent_bootstrap(p.N, cfg.verify.sigma, p.s, r1);
            out.pass = r.exited && r.increasing;
            body = to_json(r);
            std::string ladder;
            for (double x : r.r) ladder += (ladder.empty() ? "" : " ") + format_double(x);
            out.summary = "ladder " + ladder;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    out.artifacts.report = Json{{"command", "verify"}, {"target", target}, {"config", to_json(cfg)}, {"result", body}};
    out.exit_code = out.pass ? kExitOk : kExitVerifyFailed;
    return out;
}

namespace {

SweepPoint sweep_point(const RunConfig& base, double lambda) {
    RunConfig c = base;
    c.params.lambda = lambda;
    SweepPoint pt;
    pt.lambda = lambda;
    try {
        SolveReport r = run_solver(c);
        pt.converged = r.converged;
        pt.iterations = r.iterations;
        pt.final_residual = r.residual_l1.empty() ? 0.0 : r.residual_l1.back();
        pt.sup_norm = r.u.grid() ? r.u.sup() : 0.0;
        pt.status = to_string(r.status);
    } catch (const std::runtime_error& e) {
        pt.status = std::string("ERROR: ") + e.what();
    }
    return pt;
}

}  // namespace

SweepOutcome cmd_sweep(const RunConfig& cfg, int jobs) {
    if (!cfg.sweep.enabled()) throw ConfigError(0, "sweep needs sweep.count > 0");
    const int n = cfg.sweep.count;
    std::vector<double> lambdas(n);
    for (int k = 0; k < n; ++k)
        lambdas[k] = n == 1 ? cfg.sweep.lambda_min
                            : cfg.sweep.lambda_min + (cfg.sweep.lambda_max - cfg.sweep.lambda_min) * k / (n - 1);
    SweepOutcome out;
    std::vector<SweepPoint> pts(n);
    std::atomic<int> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (int k = next++; k < n; k = next++) {
            try {
                pts[k] = sweep_point(cfg, lambdas[k]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min(jobs, n));
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) {
        try {
            std::rethrow_exception(err);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(0, e.what());
        }
    }
    // refine the first transition from converged to failed
    int first_fail = -1;
    for (int k = 0; k < n; ++k)
        if (!pts[k].converged) {
            first_fail = k;
            break;
        }
    if (first_fail > 0) {
        double lo = lambdas[first_fail - 1], hi = lambdas[first_fail];
        for (int b = 0; b < cfg.sweep.bisect; ++b) {
            const double mid = 0.5 * (lo + hi);
            SweepPoint pt = sweep_point(cfg, mid);
            (pt.converged ? lo : hi) = mid;
            pts.push_back(pt);
        }
    }
    std::stable_sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.lambda < b.lambda; });
    out.points = pts;
    for (const auto& pt : pts)
        if (pt.converged) out.lambda_star_empirical = std::max(out.lambda_star_empirical, pt.lambda);

    const Regime reg = classify(cfg.params.N, cfg.params.s, cfg.params.q);
    if (reg == Regime::Critical || reg == Regime::Supercritical) {
        auto g = Grid::make(cfg.params.domain, cfg.params.N);
        const double nf = lp_norm(cfg.source.evaluate(g), cfg.params.m);
        if (nf > 0) {
            C0Measurement c0 = measure_C0(cfg.params, cfg.seed);
            out.lambda_star_analytic = schauder_lambda_star(cfg.params, nf, c0.C0).lambda_star;
        }
    }

    CsvTable t({"lambda", "converged", "iterations", "final_residual", "sup_norm"});
    Json rows = Json::array();
    for (const auto& pt : out.points) {
        t.add({pt.lambda, pt.converged ? 1.0 : 0.0, static_cast<double>(pt.iterations), pt.final_residual, pt.sup_norm});
        rows.push_back(Json{{"lambda", pt.lambda}, {"status", pt.status}});
    }
    out.artifacts.tables.emplace_back("sweep.csv", t);
    Json res{{"lambda_star_empirical", out.lambda_star_empirical}, {"points", rows}};
    if (out.lambda_star_analytic >= 0) {
        res["lambda_star_analytic"] = out.lambda_star_analytic;
        res["empirical_at_least_analytic"] = out.lambda_star_empirical >= out.lambda_star_analytic;
    }
    out.artifacts.report = Json{{"command", "sweep"}, {"config", to_json(cfg)}, {"result", res}};
    return out;
}

Json cmd_info(const RunConfig* cfg) {
    Json j{{"name", "frackpz"},
           {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION)},
           {"boost", BOOST_LIB_VERSION},
           {"solvers", {"auto", "monotone", "picard", "schauder"}},
           {"verify_targets", kVerifyTargets},
           {"exit_codes", {{"ok", kExitOk}, {"config", kExitConfig}, {"nonconvergent", kExitNonconvergent},
                           {"verify_failed", kExitVerifyFailed}}}};
    if (cfg) {
        j["config"] = to_json(*cfg);
        j["exponents"] = to_json(critical_exponents(cfg->params));
        j["normalization_constant"] = normalization_constant(cfg->params.N, cfg->params.s);
    }
    return j;
}

}  // namespace frackpz
