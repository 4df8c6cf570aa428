// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]; no argument runs all twelve.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "frackpz/core/norms.hpp"
#include "frackpz/diagnostics/diagnostics.hpp"
#include "frackpz/io/runner.hpp"
#include "frackpz/operators/constants.hpp"
#include "frackpz/operators/fraclap.hpp"
#include "frackpz/operators/periodic.hpp"
#include "frackpz/solvers/solvers.hpp"
#include "frackpz/supersolutions/supersolutions.hpp"

using namespace frackpz;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// Getoor constant in 50 digits, independent of the library's double evaluation.
double getoor_reference(int N, double s) {
    using Real = boost::multiprecision::cpp_bin_float_50;
    Real S(s), n(N);
    Real v = pow(Real(4), S) * boost::math::tgamma(1 + S) * boost::math::tgamma(n / 2 + S) / boost::math::tgamma(n / 2);
    return v.convert_to<double>();
}

Outcome fourier_symbol() {
    auto t0 = Clock::now();
    const int n = 256;
    const double L = 2 * std::numbers::pi;
    double worst = 0;
    for (int k : {1, 2, 4})
        for (double s : {0.6, 0.75, 0.9}) {
            std::vector<double> u(n);
            for (int j = 0; j < n; ++j) u[j] = std::cos(k * j * L / n);
            auto Lu = fraclap_periodic(u, s, L);
            const double sym = std::pow(k, 2 * s);
            for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(Lu[j] - sym * u[j]) / sym);
        }
    double t = seconds_since(t0);
    return {worst <= 1e-10 && t < 1, fmt("max relative error %.2e over k in {1,2,4}, s in {0.6,0.75,0.9}; %.3f s", worst, t)};
}

Outcome getoor_identity() {
    bool pass = true;
    double worst_all = 0, worst_const = 0, slowest = 0;
    for (int N = 1; N <= 3; ++N)
        for (double s : {0.6, 0.75, 0.9}) {
            auto t0 = Clock::now();
            ProblemParams p;
            p.N = N;
            p.s = s;
            p.domain = N == 1 ? DomainSpec::interval(-1, 1, 512) : DomainSpec::ball(1, 256);
            auto g = Grid::make(p.domain, N);
            auto u = sample(g, [s](double x) { return std::pow(std::max(0.0, 1 - x * x), s); });
            auto Lu = N == 1 ? fraclap_direct(u, p) : fraclap_radial(u, p);
            const double ref = getoor_reference(N, s);
            const double cerr = std::abs(getoor_constant(N, s) - ref) / ref;
            double worst = 0;
            for (int i = g->first_interior(); i <= g->last_interior(); ++i)
                worst = std::max(worst, std::abs(Lu[i] - ref) / ref);
            const double t = seconds_since(t0);
            worst_all = std::max(worst_all, worst);
            worst_const = std::max(worst_const, cerr);
            slowest = std::max(slowest, t);
            if (!(worst <= 2e-2 && cerr <= 1e-12 && t < 30)) pass = false;
        }
    return {pass, fmt("worst nodal deviation %.2e from the 50-digit constant, constant error %.1e, slowest case %.2f s",
                      worst_all, worst_const, slowest)};
}

Outcome power_identity() {
    struct Case {
        int N;
        double s, alpha;
    };
    bool pass = true;
    std::string detail;
    for (auto c : {Case{2, 0.75, 0.25}, Case{3, 0.75, 1.0}, Case{3, 0.9, 0.5}}) {
        auto r = power_eigenvalue_check(c.N, c.s, c.alpha, 256);
        if (!(r.spread <= 1e-2 && r.rel_error <= 1e-2)) pass = false;
        detail += fmt("(%d,%.2f,%.2f): spread %.1e err %.1e; ", c.N, c.s, c.alpha, r.spread, r.rel_error);
    }
    return {pass, detail};
}

Outcome green_bounds() {
    bool pass = true;
    std::string detail;
    for (int N = 1; N <= 3; ++N) {
        auto r = check_green_bounds_refinement(N, 0.75, {128, 256}, 10000);
        bool ok = r.pass && r.drift < 2;
        for (const auto& lv : r.levels)
            ok = ok && std::isfinite(lv.fitted_constant) && lv.violations == 0 && lv.grad_violations == 0 &&
                 lv.samples + lv.excluded >= 10000;
        pass = pass && ok;
        detail += fmt("N=%d drift %.2f grad drift %.2f; ", N, r.drift, r.grad_drift);
    }
    return {pass, detail};
}

Outcome monotone_scheme() {
    auto t0 = Clock::now();
    ProblemParams p;
    p.N = 2;
    p.s = 0.75;
    p.q = 1.4;
    p.domain = DomainSpec::ball(1, 256);
    auto f = SourceSpec::constant(1);
    auto bump = choose_bump(p, f);
    p.lambda = 0.5 * bump.lambda_admissible;
    auto check = verify_supersolution(bump.w, p, f);
    auto rep = monotone_iteration(p, f, &bump.w);
    double t = seconds_since(t0);

    bool mono = rep.iterates.size() >= 2;
    for (std::size_t k = 1; k < rep.iterates.size(); ++k) {
        const auto& a = rep.iterates[k - 1];
        const auto& b = rep.iterates[k];
        const double tol = 1e-8 * std::max(a.sup(), b.sup());
        for (int i = 0; i < a.size(); ++i)
            if (b[i] < a[i] - tol) mono = false;
    }
    bool below = true;
    for (int i = 0; i < rep.u.size(); ++i)
        if (rep.u[i] > bump.w.w[i] + 1e-8 * rep.u.sup()) below = false;
    const double res = rep.residual_l1.empty() ? kInf : rep.residual_l1.back();
    bool pass = check.pass && rep.status == SolveStatus::Converged && rep.monotone_flag && mono && below && res <= 1e-3 && t < 120;
    return {pass, fmt("lambda %.4g (half the verified %.4g), %zu iterates nondecreasing %s, below w %s, L1 residual %.2e, %.1f s",
                      p.lambda, bump.lambda_admissible, rep.iterates.size(), mono ? "yes" : "no", below ? "yes" : "no",
                      res, t)};
}

Outcome gain_recursion_check() {
    auto a = gain_recursion(1.0, 0.25, 2.0);
    auto b = gain_recursion(1.0, 0.3, 2.0);
    bool growing = true;
    for (std::size_t k = 1; k < b.a.size(); ++k) growing = growing && b.a[k] > b.a[k - 1];
    bool pass = a.threshold_ok && std::abs(a.limit - 2.0) <= 1e-12 && !b.threshold_ok && b.diverged &&
                b.a.size() <= 100 && growing;
    return {pass, fmt("C1=0.25: limit %.15g (threshold %.3g); C1=0.3: diverged after %zu terms", a.limit, a.threshold,
                      b.a.size())};
}

Outcome picard_scheme() {
    ProblemParams p;
    p.N = 2;
    p.s = 0.75;
    p.q = 1.4;
    p.domain = DomainSpec::ball(1, 64);
    auto f = SourceSpec::ball_indicator(0.5);
    auto m00 = check_m00(f, p);
    // measure C and C1 at negligible forcing, then stay at half the admissible scale
    p.lambda = 1e-6;
    auto pilot = picard_potential(p, f);
    const double C = pilot.metrics.at("C"), C1 = pilot.metrics.at("C1");
    const double thr = gain_recursion(C, C1, p.q).threshold;
    p.lambda = 0.5 * std::pow(thr / C1, 1 / (p.q - 1));
    auto rep = picard_potential(p, f, C1);
    const double ratio = rep.metrics.at("cauchy_ratio"), r2 = rep.metrics.at("cauchy_r2");
    bool pass = m00.pass && rep.metrics.at("threshold_ok") == 1 && rep.metrics.at("envelope_ok") == 1 && ratio < 1 &&
                r2 > 0.95;
    return {pass, fmt("(m00) %s (C1 %.3g), lambda %.3g, envelope %s, Cauchy ratio %.3f, R^2 %.4f",
                      m00.pass ? "holds" : "fails", C1, p.lambda, rep.metrics.at("envelope_ok") == 1 ? "holds" : "fails",
                      ratio, r2)};
}

Outcome lambda_star() {
    auto c = schauder_lambda_star(1 / 1.5, 1.0, 1.0);
    bool closed = std::abs(c.l - 8.0 / 27) <= 1e-12 && std::abs(c.lambda_star - 4.0 / 27) <= 1e-12;

    RunConfig cfg;
    cfg.params.N = 2;
    cfg.params.s = 0.75;
    cfg.params.q = 1.5;
    cfg.params.m = 4;
    cfg.params.domain = DomainSpec::ball(1, 128);
    cfg.source = SourceSpec::constant(1);
    cfg.sweep.lambda_min = 0;
    cfg.sweep.lambda_max = 8;
    cfg.sweep.count = 5;
    cfg.sweep.bisect = 3;
    auto sw = cmd_sweep(cfg, 1);
    bool sweep_ok = sw.lambda_star_analytic > 0 && sw.lambda_star_empirical >= sw.lambda_star_analytic;
    return {closed && sweep_ok, fmt("(l*, lambda*) = (%.15g, %.15g); sweep: empirical %.4g >= analytic %.4g", c.l,
                                    c.lambda_star, sw.lambda_star_empirical, sw.lambda_star_analytic)};
}

Outcome bootstrap_ladder() {
    auto t0 = Clock::now();
    const int N = 2;
    const double s = 0.75;
    const double sigma_min = N / (2 * s - 1), ps = p_star(N, s);
    bool pass = true;
    int worst_steps = 0;
    for (int i = 0; i < 10; ++i) {
        const double sigma = sigma_min * std::pow(25.0, (i + 1) / 10.0);
        for (int j = 0; j < 10; ++j) {
            const double r1 = 1 + (ps - 1) * (j + 0.5) / 10;
            auto b = exponent_bootstrap(N, sigma, s, r1);
            bool inc = true;
            for (std::size_t k = 1; k < b.r.size(); ++k) inc = inc && b.r[k] > b.r[k - 1];
            const double thr = sigma * N / ((2 * s - 1) * sigma - N);
            if (!(b.exited && inc && b.steps < 10000 && b.r.back() >= thr)) pass = false;
            worst_steps = std::max(worst_steps, b.steps);
        }
    }
    double t = seconds_since(t0);
    return {pass && t < 1, fmt("100 ladders strictly increasing and exiting, at most %d steps, %.3f s", worst_steps, t)};
}

Outcome regularity_window() {
    ProblemParams p;
    p.N = 3;
    p.s = 0.75;
    p.q = 1.22;
    p.lambda = 1e-6;
    const double theta = 2.7;
    auto f = SourceSpec::power(theta);
    std::vector<GridFunction> levels;
    std::vector<std::string> status;
    for (int n : {128, 255, 509}) {
        p.domain = DomainSpec::ball(1, n);
        auto r = monotone_iteration(p, f);
        status.push_back(to_string(r.status));
        levels.push_back(r.u);
    }
    std::vector<double> sigmas;
    for (int k = 0; k <= 40; ++k) sigmas.push_back(1.0 + 0.05 * k);
    const double cap = std::min(p.N / (theta - 2 * p.s + 1), 2 * p.s);
    auto rep = regularity_probe(levels, cap, sigmas);
    bool converged = std::all_of(status.begin(), status.end(), [](const std::string& s) { return s == "CONVERGED"; });
    return {converged && rep.within_window,
            fmt("theta %.2f: empirical threshold %.3g, predicted cap %.4g, ratio %.3f", theta, rep.threshold, cap,
                rep.threshold / cap)};
}

Outcome singular_weight() {
    ProblemParams p;
    p.N = 1;
    p.s = 0.75;
    p.domain = DomainSpec::interval(-1, 1, 257);
    auto r = singular_weight_study(1.25, p);
    return {r.pass, fmt("sup norms %.3g..%.3g (last decade x%.3f, saturated %s); seminorm above threshold %s "
                        "(growth %.3f), below threshold growing %s (growth %.3f)",
                        r.sup_norms.front(), r.sup_norms.back(), r.last_decade_growth, r.saturated ? "yes" : "no",
                        r.high_stable ? "stable" : "unstable", r.growth_high, r.low_growing ? "yes" : "no",
                        r.growth_low)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    std::string cmd = "'" FRACKPZ_CLI_PATH "' " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
    fs::path dir = fs::temp_directory_path() / "frackpz_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "params.N = 2\nparams.s = 0.75\nparams.q = 1.4\nparams.lambda = 0.005\n"
                                      "domain.kind = ball\ndomain.grid_n = 96\nsource.kind = indicator\n"
                                      "source.radius = 0.5\nsweep.lambda_min = 0\nsweep.lambda_max = 0.02\n"
                                      "sweep.count = 4\nsweep.bisect = 2\nseed = 2024\n";
    const std::string cfg = "--config '" + (dir / "run.cfg").string() + "'";
    bool ran = true;
    for (const char* tag : {"a", "b"}) {
        const std::string out = " --out '" + (dir / tag).string() + "'";
        ran = ran && run_cli("solve " + cfg + out) == 0;
        ran = ran && run_cli("sweep " + cfg + out + (tag[0] == 'a' ? " --jobs 1" : " --jobs 4")) == 0;
        ran = ran && run_cli("verify greenbounds " + cfg + out) == 0;
    }
    int compared = 0, identical = 0;
    for (const char* f : {"report.json", "solution.csv", "iterates.csv", "sweep.json", "sweep.csv",
                          "verify_greenbounds.json", "bounds.csv"}) {
        ++compared;
        if (fs::exists(dir / "a" / f) && slurp(dir / "a" / f) == slurp(dir / "b" / f)) ++identical;
    }
    fs::remove_all(dir);
    return {ran && identical == compared, fmt("%d of %d output files byte-identical across two runs", identical, compared)};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"Fourier-symbol oracle", fourier_symbol},
        {"Getoor identity", getoor_identity},
        {"power eigen-identity", power_identity},
        {"Green bounds", green_bounds},
        {"monotone scheme", monotone_scheme},
        {"gain recursion", gain_recursion_check},
        {"Picard scheme", picard_scheme},
        {"lambda* closed form and sweep", lambda_star},
        {"bootstrap ladder", bootstrap_ladder},
        {"regularity window", regularity_window},
        {"singular-weight problem", singular_weight},
        {"determinism", determinism},
    };
    std::vector<int> chosen;
    for (int k = 1; k < argc; ++k) {
        int c = std::atoi(argv[k]);
        if (c < 1 || c > static_cast<int>(all.size())) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[k]);
            return 2;
        }
        chosen.push_back(c);
    }
    if (chosen.empty())
        for (int c = 1; c <= static_cast<int>(all.size()); ++c) chosen.push_back(c);

    int failures = 0;
    for (int c : chosen) {
        const auto& cr = all[c - 1];
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %-30s %s  %s (%.1f s)\n", c, cr.name, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
