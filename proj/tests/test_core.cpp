#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/norms.hpp"
#include "frackpz/core/parallel.hpp"
#include "frackpz/core/params.hpp"
#include "frackpz/core/shell_kernel.hpp"
#include "frackpz/core/source.hpp"

using namespace frackpz;

namespace {

GridFunction random_function(const GridPtr& g, unsigned seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-scale, scale);
    return sample(g, [&](double) { return U(rng); });
}

}  // namespace

TEST_CASE("exponents and regime classification") {
    CHECK(p_star(1, 0.75) == doctest::Approx(2.0));
    CHECK(p_star(3, 0.75) == doctest::Approx(1.2));
    CHECK(classify(2, 0.75, 1.5) == Regime::Critical);
    CHECK(classify(2, 0.75, 1.6) == Regime::Supercritical);
    CHECK(classify(2, 0.75, 1.2) == Regime::SubcriticalLow);
    CHECK(classify(2, 0.75, 1.4) == Regime::Subcritical);
    CHECK(std::isinf(regularity_cap(2, 0.75, kInf)));
    CHECK(regularity_cap(2, 0.75, 2) == doctest::Approx(4.0));
    CHECK(std::isinf(regularity_cap(2, 0.75, 4)));

    ProblemParams p;
    p.N = 3;
    p.s = 0.75;
    p.m = 2;
    p.domain = DomainSpec::ball(1, 32);
    auto t = critical_exponents(p);
    CHECK(t.critical_q == doctest::Approx(1.5));
    CHECK(t.alpha0 == doctest::Approx(1.5));
    CHECK(t.regularity_cap == doctest::Approx(3.0));
}

TEST_CASE("parameter validation") {
    ProblemParams p;
    p.domain = DomainSpec::interval(-1, 1, 32);
    CHECK_NOTHROW(p.validate());
    p.s = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.s = 0.75;
    p.q = 1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.q = 1.5;
    p.N = 2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(DomainSpec::interval(1, -1, 32), std::invalid_argument);
    CHECK_THROWS_AS(DomainSpec::ball(1, 8), std::invalid_argument);
}

TEST_CASE("grid measures add up to the domain volume") {
    auto gi = Grid::make(DomainSpec::interval(-1, 2, 61), 1);
    double sum = 0;
    for (double m : gi->measures()) sum += m;
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-12));
    for (int N = 1; N <= 3; ++N) {
        auto g = Grid::make(DomainSpec::ball(1.5, 101), N);
        double total = 0;
        for (double m : g->measures()) total += m;
        CHECK(total == doctest::Approx(g->volume()).epsilon(1e-3));
    }
    CHECK(gi->is_boundary(0));
    CHECK(gi->is_boundary(gi->size() - 1));
    CHECK(gi->distance(30) == doctest::Approx(1.5));
}

TEST_CASE("grid functions vanish outside the domain") {
    auto g = Grid::make(DomainSpec::interval(-1, 1, 33), 1);
    auto u = sample(g, [](double x) { return 1 - x * x; });
    CHECK(u[0] == 0);
    CHECK(u[32] == 0);
    CHECK(u.at(1.5) == 0);
    CHECK(u.at(0.0) == doctest::Approx(1.0));
    auto back = GridFunction::from_interior(g, u.interior());
    CHECK((back.values() - u.values()).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("truncations split u and clamp to [-k, k]") {
    auto g = Grid::make(DomainSpec::interval(-1, 1, 65), 1);
    auto u = random_function(g, 7, 3.0);
    for (double k : {0.1, 1.0, 2.5, 10.0}) {
        auto T = truncate(u, k);
        auto G = remainder(u, k);
        for (int i = 0; i < g->size(); ++i) {
            CHECK(T[i] + G[i] == doctest::Approx(u[i]));
            CHECK(std::abs(T[i]) <= k);
            if (std::abs(u[i]) <= k) CHECK(G[i] == 0);
            CHECK(T[i] * G[i] >= 0);
        }
    }
}

TEST_CASE("pairwise sum is order-stable and accurate") {
    std::vector<double> x(10001, 0.1);
    CHECK(pairwise_sum(x) == doctest::Approx(1000.1).epsilon(1e-14));
    CHECK(pairwise_sum(std::vector<double>{}) == 0);
}

TEST_CASE("norm properties") {
    auto g = Grid::make(DomainSpec::ball(1, 97), 2);
    auto u = random_function(g, 11);
    auto v = random_function(g, 12);

    SUBCASE("homogeneity and triangle inequality") {
        for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
            GridFunction w(g, 3.0 * u.values());
            CHECK(lp_norm(w, p) == doctest::Approx(3 * lp_norm(u, p)));
            GridFunction sum(g, u.values() + v.values());
            CHECK(lp_norm(sum, p) <= lp_norm(u, p) + lp_norm(v, p) + 1e-12);
        }
    }
    SUBCASE("Hoelder") {
        for (double p : {1.5, 2.0, 3.0}) {
            double pp = p / (p - 1);
            GridFunction prod(g, u.values().cwiseProduct(v.values()));
            CHECK(lp_norm(prod, 1) <= lp_norm(u, p) * lp_norm(v, pp) * (1 + 1e-12));
        }
    }
    SUBCASE("weak norm is bounded by the strong norm") {
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            CHECK(weak_lp_norm(u, p) <= lp_norm(u, p) * (1 + 1e-12));
            GridFunction w(g, 2.0 * u.values());
            CHECK(weak_lp_norm(w, p) == doctest::Approx(2 * weak_lp_norm(u, p)));
        }
    }
    SUBCASE("constant function") {
        auto c = sample(g, [](double) { return 2.0; });
        double vol = 0;
        for (int i = 0; i < g->size(); ++i)
            if (!g->is_boundary(i)) vol += g->measure(i);
        CHECK(lp_norm(c, 1) == doctest::Approx(2 * vol));
        CHECK(weak_lp_norm(c, 2) == doctest::Approx(2 * std::sqrt(vol)));
        CHECK(lp_norm(c, kInf) == 2.0);
    }
    CHECK_THROWS_AS(lp_norm(u, 0.5), std::invalid_argument);
}

TEST_CASE("Gagliardo seminorm") {
    auto g = Grid::make(DomainSpec::interval(-1, 1, 65), 1);
    auto u = random_function(g, 3);
    GridFunction w(g, -2.0 * u.values());
    CHECK(gagliardo_seminorm(w, 0.75) == doctest::Approx(2 * gagliardo_seminorm(u, 0.75)));
    CHECK(gagliardo_seminorm(u, 0.75, true) >= gagliardo_seminorm(u, 0.75));
    auto zero = GridFunction(g);
    CHECK(gagliardo_seminorm(zero, 0.75, true) == 0);
}

TEST_CASE("finite derivative is exact on quadratics") {
    auto g = Grid::make(DomainSpec::interval(-1, 1, 41), 1);
    auto u = sample(g, [](double x) { return 1 - x * x + 0.3 * x; });
    auto du = finite_derivative(u);
    for (int i = g->first_interior(); i <= g->last_interior(); ++i)
        CHECK(du[i] == doctest::Approx(-2 * g->node(i) + 0.3).epsilon(1e-10));
    auto gr = finite_gradient(u);
    for (int i = 0; i < g->size(); ++i) CHECK(gr[i] == doctest::Approx(std::abs(du[i])));

    auto gb = Grid::make(DomainSpec::ball(1, 41), 3);
    auto ub = sample(gb, [](double r) { return 1 - r * r; });
    auto dub = finite_derivative(ub);
    CHECK(dub[0] == 0);
    for (int i = 1; i <= gb->last_interior(); ++i)
        CHECK(dub[i] == doctest::Approx(-2 * gb->node(i)).epsilon(1e-10));
}

TEST_CASE("boundary distance") {
    auto g = Grid::make(DomainSpec::ball(2, 21), 2);
    auto d = boundary_distance(g);
    for (int i = 0; i < g->size(); ++i) CHECK(d[i] == doctest::Approx(g->distance(i)));
    CHECK(g->distance(0) == doctest::Approx(2.0));
}

TEST_CASE("shell kernel against closed forms") {
    CHECK(sphere_area(1) == doctest::Approx(2.0));
    CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
    CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
    const double beta = 3.5;
    for (auto [r, rho] : std::vector<std::pair<double, double>>{{0.3, 0.8}, {1.0, 0.2}, {0.5, 0.55}}) {
        double k1 = std::pow(std::abs(r - rho), -beta) + std::pow(r + rho, -beta);
        CHECK(shell_kernel(1, beta, r, rho) == doctest::Approx(k1).epsilon(1e-12));
        double k3 = 2 * std::numbers::pi / (r * rho * (beta - 2)) *
                    (std::pow(std::abs(r - rho), 2 - beta) - std::pow(r + rho, 2 - beta));
        CHECK(shell_kernel(3, beta, r, rho) == doctest::Approx(k3).epsilon(1e-9));
    }
    // N = 2 at the centre: the integrand is constant over the circle
    CHECK(shell_kernel(2, beta, 0.0, 0.7) == doctest::Approx(2 * std::numbers::pi * std::pow(0.7, -beta)));
    // the cut-off only removes mass
    CHECK(shell_kernel(2, beta, 0.5, 0.52, 0.05) < shell_kernel(2, beta, 0.5, 0.52));
}

TEST_CASE("exterior tail") {
    const double beta = 2.5, R = 1.0;
    for (double r : {0.0, 0.3, 0.9}) {
        double ref = (std::pow(R - r, 1 - beta) + std::pow(R + r, 1 - beta)) / (beta - 1);
        CHECK(exterior_tail(1, beta, r, R) == doctest::Approx(ref).epsilon(1e-8));
    }
    // at the centre of a ball: |S^{N-1}| R^{N-beta} / (beta - N)
    CHECK(exterior_tail(3, 4.5, 0.0, 2.0) ==
          doctest::Approx(4 * std::numbers::pi * std::pow(2.0, -1.5) / 1.5).epsilon(1e-8));
}

TEST_CASE("sources") {
    auto g = Grid::make(DomainSpec::ball(1, 33), 3);
    auto c = SourceSpec::constant(2.0).evaluate(g);
    CHECK(c[0] == 2.0);
    CHECK(c[32] == 0);
    auto ind = SourceSpec::ball_indicator(0.5).evaluate(g);
    CHECK(ind[0] == 1.0);
    CHECK(ind[30] == 0.0);
    auto pw = SourceSpec::power(1.5).evaluate(g);
    CHECK(std::isfinite(pw[0]));
    CHECK(pw[8] == doctest::Approx(std::pow(0.25, -1.5)));
    CHECK_THROWS_AS(SourceSpec::power(3.0).evaluate(g), std::invalid_argument);
    CHECK(SourceSpec::constant(1).nonnegative());
    CHECK_FALSE(SourceSpec::constant(-1).nonnegative());
    auto tab = SourceSpec::tabulated({0.0, 1.0}, {0.0, 2.0});
    CHECK(tab(0.25) == doctest::Approx(0.5));
}

TEST_CASE("parallel_for covers every index once for any thread count") {
    for (int threads : {1, 2, 3, 8}) {
        std::vector<int> hits(97, 0);
        parallel_for(97, [&](int i) { hits[i] += 1; }, threads);
        for (int h : hits) CHECK(h == 1);
    }
}
