#pragma once

#include <limits>
#include <string>

namespace frackpz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DomainKind { Interval, Ball };

/// Discretized domain. Interval nodes are x_i = a + i h, i = 0..grid_n-1,
/// ball nodes are radii r_i = i h with r_{grid_n-1} = R.
struct DomainSpec {
    DomainKind kind = DomainKind::Interval;
    double a = -1.0;
    double b = 1.0;
    double R = 1.0;
    int grid_n = 256;

    static DomainSpec interval(double a, double b, int n);
    static DomainSpec ball(double R, int n);

    double h() const;
    double diameter() const;
    void validate() const;
};

struct ProblemParams {
    int N = 1;
    double s = 0.75;
    double q = 1.5;
    double lambda = 0.0;
    double m = kInf;
    DomainSpec domain;

    void validate() const;
};

enum class Regime { SubcriticalLow, Subcritical, Critical, Supercritical };

std::string to_string(Regime r);

struct ExponentTable {
    double p_star = 0;
    double critical_q = 0;
    double regularity_cap = kInf;  // mN/(N - m(2s-1)), infinite when unbounded
    double alpha0 = kInf;          // N/(N - m(2s-1))
    Regime regime = Regime::Subcritical;
};

inline constexpr double kCriticalTol = 1e-12;

double p_star(int N, double s);
double regularity_cap(int N, double s, double m);
Regime classify(int N, double s, double q);
ExponentTable critical_exponents(const ProblemParams& p);

}  // namespace frackpz
