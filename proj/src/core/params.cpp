#include "frackpz/core/params.hpp"

#include <cmath>
#include <stdexcept>

namespace frackpz {

DomainSpec DomainSpec::interval(double a, double b, int n) {
    DomainSpec d;
    d.kind = DomainKind::Interval;
    d.a = a;
    d.b = b;
    d.grid_n = n;
    d.validate();
    return d;
}

DomainSpec DomainSpec::ball(double R, int n) {
    DomainSpec d;
    d.kind = DomainKind::Ball;
    d.R = R;
    d.grid_n = n;
    d.validate();
    return d;
}

double DomainSpec::h() const {
    return kind == DomainKind::Interval ? (b - a) / (grid_n - 1) : R / (grid_n - 1);
}

double DomainSpec::diameter() const { return kind == DomainKind::Interval ? b - a : 2 * R; }

void DomainSpec::validate() const {
    if (grid_n < 16) throw std::invalid_argument("grid_n must be at least 16");
    if (kind == DomainKind::Interval) {
        if (!(a < b)) throw std::invalid_argument("interval requires a < b");
    } else if (!(R > 0)) {
        throw std::invalid_argument("ball radius must be positive");
    }
}

void ProblemParams::validate() const {
    if (N < 1 || N > 3) throw std::invalid_argument("dimension N must be 1, 2 or 3");
    if (!(s > 0.5 && s < 1)) throw std::invalid_argument("s must lie in (1/2, 1)");
    if (!(q > 1)) throw std::invalid_argument("q must be > 1");
    if (!(lambda >= 0)) throw std::invalid_argument("lambda must be >= 0");
    if (!(m >= 1)) throw std::invalid_argument("m must be >= 1");
    if (domain.kind == DomainKind::Interval && N != 1)
        throw std::invalid_argument("interval domains require N = 1");
    domain.validate();
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::SubcriticalLow: return "SUBCRITICAL_LOW";
        case Regime::Subcritical: return "SUBCRITICAL";
        case Regime::Critical: return "CRITICAL";
        case Regime::Supercritical: return "SUPERCRITICAL";
    }
    return "UNKNOWN";
}

double p_star(int N, double s) { return N / (N - 2 * s + 1); }

double regularity_cap(int N, double s, double m) {
    if (std::isinf(m)) return kInf;
    double den = N - m * (2 * s - 1);
    if (den <= 0) return kInf;
    return m * N / den;
}

Regime classify(int N, double s, double q) {
    if (std::abs(q - 2 * s) <= kCriticalTol) return Regime::Critical;
    if (q > 2 * s) return Regime::Supercritical;
    if (q < p_star(N, s)) return Regime::SubcriticalLow;
    return Regime::Subcritical;
}

ExponentTable critical_exponents(const ProblemParams& p) {
    ExponentTable t;
    t.p_star = p_star(p.N, p.s);
    t.critical_q = 2 * p.s;
    t.regularity_cap = regularity_cap(p.N, p.s, p.m);
    if (!std::isinf(p.m)) {
        double den = p.N - p.m * (2 * p.s - 1);
        t.alpha0 = den > 0 ? p.N / den : kInf;
    }
    t.regime = classify(p.N, p.s, p.q);
    return t;
}

}  // namespace frackpz
