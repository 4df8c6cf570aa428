#include <doctest.h>

#include <cmath>

#include "frackpz/core/norms.hpp"
#include "frackpz/operators/constants.hpp"
#include "frackpz/solvers/potentials.hpp"
#include "frackpz/solvers/solvers.hpp"

using namespace frackpz;

namespace {

ProblemParams ball_problem(int N, double q, int n, double lambda = 0) {
    ProblemParams p;
    p.N = N;
    p.s = 0.75;
    p.q = q;
    p.lambda = lambda;
    p.domain = DomainSpec::ball(1, n);
    return p;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("truncated nonlinearity") {
    for (double xi : {-3.0, -0.5, 0.0, 0.2, 4.0})
        for (double n : {1.0, 4.0, 64.0}) {
            double v = truncated_nonlinearity(xi, 1.4, n);
            CHECK(v >= 0);
            CHECK(v <= std::pow(std::abs(xi), 1.4) + 1e-15);
            CHECK(v < n);
            CHECK(v <= truncated_nonlinearity(xi, 1.4, 2 * n) + 1e-15);
        }
    CHECK(truncated_nonlinearity(1e8, 1.4, 3.0) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("linear solve: Getoor data, linearity and positivity") {
    for (int N = 1; N <= 3; ++N) {
        ProblemParams p = N == 1 ? ProblemParams{} : ball_problem(N, 1.4, 65);
        if (N == 1) p.domain = DomainSpec::interval(-1, 1, 65);
        p.N = N;
        auto g = Grid::make(p.domain, N);
        auto f = sample(g, [N](double) { return getoor_constant(N, 0.75); });
        auto u = linear_solve(f, p);
        for (int i = 0; i < g->size(); ++i) {
            double x = g->node(i);
            CHECK(u[i] == doctest::Approx(std::pow(std::max(0.0, 1 - x * x), 0.75)).epsilon(1e-8).scale(1));
        }
        auto f2 = sample(g, [](double x) { return std::exp(-x * x) + 0.1; });
        auto v = linear_solve(f2, p);
        for (int i = g->first_interior(); i <= g->last_interior(); ++i) CHECK(v[i] > 0);
        GridFunction mix(g, 2.0 * f.values() - f2.values());
        auto w = linear_solve(mix, p);
        CHECK(max_abs_diff(w, GridFunction(g, 2.0 * u.values() - v.values())) < 1e-10);
    }
}

TEST_CASE("equation residual vanishes on exact linear data") {
    auto p = ball_problem(2, 1.4, 65, 1.0);
    auto g = Grid::make(p.domain, p.N);
    auto f = sample(g, [](double) { return 1.0; });
    GridFunction zero(g);
    auto r = equation_residual(zero, p, f);
    for (int i = g->first_interior(); i <= g->last_interior(); ++i) CHECK(r[i] == doctest::Approx(-1.0));
}

TEST_CASE("zero data gives the zero solution") {
    auto p = ball_problem(2, 1.4, 49, 0.0);
    auto rep = monotone_iteration(p, SourceSpec::constant(1));
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.u.sup() == 0);

    ProblemParams pi;
    pi.q = 1.2;
    pi.domain = DomainSpec::interval(-1, 1, 33);
    auto r1 = solve_auto(pi, SourceSpec::constant(1));
    CHECK(r1.converged);
    CHECK(r1.u.sup() == 0);
}

TEST_CASE("monotone scheme: nondecreasing iterates below the supersolution") {
    auto p = ball_problem(2, 1.4, 49);
    auto f = SourceSpec::constant(1);
    auto bump = choose_bump(p, f);
    REQUIRE(bump.lambda_admissible > 0);
    p.lambda = 0.5 * bump.lambda_admissible;
    auto rep = monotone_iteration(p, f, &bump.w);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.monotone_flag);
    REQUIRE(rep.iterates.size() >= 2);
    for (std::size_t k = 1; k < rep.iterates.size(); ++k) {
        const auto& a = rep.iterates[k - 1];
        const auto& b = rep.iterates[k];
        for (int i = 0; i < a.size(); ++i) CHECK(b[i] >= a[i] - 1e-8 * b.sup());
    }
    for (int i = 0; i < rep.u.size(); ++i) CHECK(rep.u[i] <= bump.w.w[i] + 1e-8 * bump.w.w.sup());
    CHECK(rep.residual_l1.back() < 1e-3);
    CHECK(rep.metrics.at("max_excess_over_supersolution") <= 0);
}

TEST_CASE("solutions are ordered in lambda") {
    auto p = ball_problem(2, 1.4, 49);
    auto f = SourceSpec::constant(1);
    auto bump = choose_bump(p, f);
    p.lambda = 0.3 * bump.lambda_admissible;
    auto lo = monotone_iteration(p, f, &bump.w);
    p.lambda = 0.9 * bump.lambda_admissible;
    auto hi = monotone_iteration(p, f, &bump.w);
    REQUIRE(lo.converged);
    REQUIRE(hi.converged);
    for (int i = 0; i < lo.u.size(); ++i) CHECK(lo.u[i] <= hi.u[i] + 1e-12);
    CHECK(hi.u.sup() > lo.u.sup());
}

TEST_CASE("truncated problem has one solution from two initializations") {
    // q below p_* = N / (N - 2s + 1)
    auto p = ball_problem(2, 1.3, 49);
    REQUIRE(classify(p.N, p.s, p.q) == Regime::SubcriticalLow);
    auto f = SourceSpec::constant(1);
    auto bump = choose_bump(p, f);
    p.lambda = 0.5 * bump.lambda_admissible;
    auto g = Grid::make(p.domain, p.N);
    auto fv = f.evaluate(g);
    SolverOptions opt;
    opt.tol_inner = 1e-12;
    opt.max_inner = 500;
    auto from_zero = truncated_step(GridFunction(g), 8, p, fv, opt);
    GridFunction top(g);
    for (int i = 0; i < g->size(); ++i) top[i] = g->is_boundary(i) ? 0.0 : bump.w.w[i];
    auto from_top = truncated_step(top, 8, p, fv, opt);
    REQUIRE(from_zero.converged);
    REQUIRE(from_top.converged);
    CHECK(max_abs_diff(from_zero.u, from_top.u) < 1e-8 * from_zero.u.sup());
}

TEST_CASE("gain recursion") {
    SUBCASE("touching threshold converges to C q'") {
        auto r = gain_recursion(1.0, 0.25, 2.0);
        CHECK(r.threshold == doctest::Approx(0.25));
        CHECK(r.threshold_ok);
        CHECK_FALSE(r.diverged);
        CHECK(std::abs(r.limit - 2.0) <= 1e-12);
        for (std::size_t k = 1; k < r.a.size(); ++k) CHECK(r.a[k] >= r.a[k - 1]);
        CHECK(r.a.back() <= 2.0 + 1e-12);
    }
    SUBCASE("below threshold: smaller fixed point") {
        auto r = gain_recursion(1.0, 0.2, 2.0);
        CHECK(r.threshold_ok);
        // fixed point of a = 1 + 0.2 a^2
        CHECK(r.limit == doctest::Approx((1 - std::sqrt(1 - 0.8)) / 0.4).epsilon(1e-10));
    }
    SUBCASE("above threshold: divergence") {
        auto r = gain_recursion(1.0, 0.3, 2.0);
        CHECK_FALSE(r.threshold_ok);
        CHECK(r.diverged);
        CHECK(r.a.size() <= 100);
        CHECK(r.a.back() > 2.0);
    }
}

TEST_CASE("lambda star closed form") {
    auto c = schauder_lambda_star(1 / 1.5, 1.0, 1.0);
    CHECK(std::abs(c.l - 8.0 / 27) <= 1e-12);
    CHECK(std::abs(c.lambda_star - 4.0 / 27) <= 1e-12);
    auto h = schauder_lambda_star(0.5, 1.0, 1.0);
    CHECK(h.l == doctest::Approx(0.25));
    CHECK(h.lambda_star == doctest::Approx(0.25));
    // lambda* scales like 1 / ||f||
    CHECK(schauder_lambda_star(0.5, 2.0, 1.0).lambda_star == doctest::Approx(0.125));

    // the level solves C0 (l + lambda ||f||) = l^e and does not exist beyond lambda*
    double l = schauder_level(1 / 1.5, 1.0, 1.0, 0.1);
    CHECK(1.0 * (l + 0.1) == doctest::Approx(std::pow(l, 1 / 1.5)));
    CHECK(l < c.l);
    CHECK(std::isnan(schauder_level(1 / 1.5, 1.0, 1.0, 0.2)));

    ProblemParams p;
    p.N = 2;
    p.q = 1.5;
    p.domain = DomainSpec::ball(1, 33);
    CHECK(schauder_lambda_star(p, 1.0, 1.0).exponent == doctest::Approx(1 / 1.5));
    p.q = 1.8;
    CHECK(schauder_lambda_star(p, 1.0, 1.0).exponent == doctest::Approx(1 / 1.8));
}

TEST_CASE("Schauder iteration inside and beyond lambda*") {
    auto p = ball_problem(2, 1.5, 49);
    p.m = 4;
    auto f = SourceSpec::constant(1);
    auto c0 = measure_C0(p);
    CHECK(c0.C0 > 0);
    CHECK(c0.ratios.size() >= 7);
    CHECK(measure_C0(p).C0 == c0.C0);
    auto g = Grid::make(p.domain, p.N);
    double nf = lp_norm(f.evaluate(g), p.m);
    auto ls = schauder_lambda_star(p, nf, c0.C0);
    double lam = 0.5 * ls.lambda_star;
    auto rep = schauder_iterate(p, f, schauder_level(ls.exponent, nf, c0.C0, lam), lam);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.metrics.at("set_invariant_ok") == 1);
    CHECK(rep.metrics.count("minimal_from_zero") == 1);
    auto smaller = schauder_iterate(p, f, schauder_level(ls.exponent, nf, c0.C0, 0.5 * lam), 0.5 * lam);
    REQUIRE(smaller.converged);
    for (int i = 0; i < g->size(); ++i) CHECK(smaller.u[i] <= rep.u[i] + 1e-10);

    auto big = schauder_iterate(p, f, ls.l, 20 * ls.lambda_star);
    CHECK(big.status != SolveStatus::Converged);
    CHECK_THROWS(schauder_iterate(ball_problem(2, 1.4, 33), f, 1.0, 0.1));
}

TEST_CASE("solve_auto dispatches on the regime") {
    auto f = SourceSpec::constant(1);
    auto sub = solve_auto(ball_problem(2, 1.4, 33, 0.001), f);
    CHECK(sub.solver == "monotone");
    CHECK(sub.metrics.count("lambda_admissible") == 1);
    auto crit = ball_problem(2, 1.5, 33, 0.01);
    crit.m = 4;
    CHECK(solve_auto(crit, f).solver == "schauder");
}

TEST_CASE("drift solve") {
    ProblemParams p;
    p.domain = DomainSpec::interval(-1, 1, 49);
    auto g = Grid::make(p.domain, 1);
    auto f = sample(g, [](double) { return getoor_constant(1, 0.75); });
    auto plain = drift_solve(GridFunction(g), f, p);
    CHECK_FALSE(plain.near_singular);
    CHECK(max_abs_diff(plain.w, linear_solve(f, p)) < 1e-10);
    auto B = sample(g, [](double x) { return 0.3 * x; });
    auto d = drift_solve(B, f, p);
    CHECK(d.kernel_gap > 0);
    CHECK(d.w.finite());
}

TEST_CASE("(m00) constant is finite and scale invariant in the source") {
    auto p = ball_problem(2, 1.4, 33);
    PotentialBox box(p.domain, p.N);
    auto f1 = box.source(SourceSpec::ball_indicator(0.5));
    auto f2 = box.source(SourceSpec::ball_indicator(0.5, 3.0));
    double c1 = m00_constant(f1, p.s, p.q);
    double c2 = m00_constant(f2, p.s, p.q);
    CHECK(std::isfinite(c1));
    CHECK(c1 > 0);
    // Q/P is homogeneous of degree q - 1 in f
    CHECK(c2 == doctest::Approx(std::pow(3.0, p.q - 1) * c1).epsilon(1e-10));
}

TEST_CASE("Picard potential iteration on a small instance") {
    auto p = ball_problem(2, 1.4, 33, 0.002);
    auto rep = picard_potential(p, SourceSpec::ball_indicator(0.5));
    CHECK(rep.solver == "picard");
    CHECK(rep.metrics.at("threshold_ok") == 1);
    CHECK(rep.metrics.at("envelope_ok") == 1);
    CHECK(rep.metrics.at("cauchy_ratio") < 1);
    CHECK(rep.converged);
    ProblemParams pi;
    pi.domain = DomainSpec::interval(-1, 1, 33);
    CHECK_THROWS(picard_potential(pi, SourceSpec::constant(1)));
}
