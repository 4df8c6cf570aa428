#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "frackpz/operators/constants.hpp"
#include "frackpz/operators/green.hpp"
#include "frackpz/supersolutions/supersolutions.hpp"

using namespace frackpz;
using Real = boost::multiprecision::cpp_bin_float_50;

namespace {

Real hp(double x) { return Real(x); }

Real hp_pi() { return boost::math::constants::pi<Real>(); }

double rel(double v, const Real& ref) {
    Real e = abs((Real(v) - ref) / ref);
    return e.convert_to<double>();
}

Real gamma(const Real& x) { return boost::math::tgamma(x); }

}  // namespace

TEST_CASE("normalization constant against 50-digit evaluation") {
    for (int N = 1; N <= 3; ++N)
        for (double s : {0.55, 0.6, 0.75, 0.9, 0.99}) {
            Real S = hp(s);
            Real ref = pow(Real(4), S) * pow(hp_pi(), -Real(N) / 2) * gamma((Real(N) + 2 * S) / 2) / abs(gamma(-S));
            CHECK(rel(normalization_constant(N, s), ref) < 1e-13);
        }
}

TEST_CASE("Getoor constant against 50-digit evaluation") {
    for (int N = 1; N <= 3; ++N)
        for (double s : {0.55, 0.6, 0.75, 0.9, 0.99}) {
            Real S = hp(s);
            Real ref = pow(Real(4), S) * gamma(1 + S) * gamma(Real(N) / 2 + S) / gamma(Real(N) / 2);
            CHECK(rel(getoor_constant(N, s), ref) < 1e-13);
        }
}

TEST_CASE("Riesz constant against 50-digit evaluation") {
    for (int N = 1; N <= 3; ++N)
        for (double a : {0.2, 0.5, 0.9}) {
            double alpha = a * N;
            Real A = hp(alpha);
            Real ref = gamma((Real(N) - A) / 2) / (pow(hp_pi(), Real(N) / 2) * pow(Real(2), A) * gamma(A / 2));
            CHECK(rel(riesz_constant(N, alpha), ref) < 1e-13);
        }
}

TEST_CASE("power eigenvalue against 50-digit evaluation") {
    struct Case {
        int N;
        double s, alpha;
    };
    for (auto c : {Case{2, 0.75, 0.25}, Case{3, 0.75, 1.0}, Case{3, 0.9, 0.5}}) {
        Real S = hp(c.s), A = hp(c.alpha), n = Real(c.N);
        Real ref = pow(Real(4), S) * gamma((A + 2 * S) / 2) * gamma((n - A) / 2) /
                   (gamma(A / 2) * gamma((n - A - 2 * S) / 2));
        CHECK(rel(power_eigenvalue(c.N, c.s, c.alpha), ref) < 1e-12);
    }
    // no admissible exponent when N <= 2s
    CHECK_THROWS(power_eigenvalue(1, 0.75, 0.3));
}

TEST_CASE("Green constant against 50-digit evaluation") {
    for (int N = 1; N <= 3; ++N)
        for (double s : {0.6, 0.75, 0.9}) {
            Real S = hp(s);
            Real g = gamma(S);
            Real ref = gamma(Real(N) / 2) / (pow(Real(4), S) * pow(hp_pi(), Real(N) / 2) * g * g);
            CHECK(rel(green_kappa_reference(N, s), ref) < 1e-13);
        }
}

TEST_CASE("Green profile against incomplete beta in 50 digits") {
    // B(z) = int_0^z t^{s-1}(1+t)^{-N/2} dt = B(s, N/2 - s) I_{z/(1+z)}(s, N/2 - s) for N > 2s
    for (int N = 2; N <= 3; ++N) {
        BallGreenFunction G(N, 0.75);
        for (double z : {1e-4, 0.3, 2.0, 50.0, 1e4}) {
            Real a = hp(0.75), b = Real(N) / 2 - a, x = hp(z) / (1 + hp(z));
            Real ref = boost::math::beta(a, b, x);
            CHECK(rel(G.profile_exact(z), ref) < 1e-10);
            CHECK(rel(G.profile(z), ref) < 1e-7);
        }
    }
}
