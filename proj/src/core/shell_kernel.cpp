#include "frackpz/core/shell_kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frackpz {

namespace {

using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& ts() {
    thread_local tanh_sinh<double> q(12);
    return q;
}

constexpr double kTol = 1e-11;

/// int_0^V (sin^2 v + k^2 cos^2 v)^p dv via v = k sinh(t), smooth in t.
double layer_integral(double k, double p, double V) {
    using G = boost::math::quadrature::gauss<double, 24>;
    const double T = std::asinh(V / k);
    auto f = [&](double t) {
        double v = k * std::sinh(t), a = std::sin(v), b = std::cos(v);
        return std::pow(a * a + k * k * b * b, p) * k * std::cosh(t);
    };
    return G::integrate(f, 0.0, 0.5 * T) + G::integrate(f, 0.5 * T, T);
}

double kernel_2d(double beta, double r, double rho, double h) {
    const double e = std::abs(r - rho);
    const double P = r + rho;
    if (P == 0) return h > 0 ? 0.0 : INFINITY;
    if (h >= P) return 0.0;
    const double half_pi = 0.5 * std::numbers::pi;
    if (e > 1e-15 * P) {
        // |r e1 - rho w|^2 = e^2 cos^2 phi + P^2 sin^2 phi; tan(phi) = (e/P) tan(u)
        // maps the peak at phi = 0 to a layer at u = pi/2 of width e/P
        const double k = e / P;
        double V = half_pi;
        if (h > e) {
            double s2 = (h * h - e * e) / (P * P - e * e);
            double phi0 = std::asin(std::sqrt(std::min(1.0, s2)));
            V = half_pi - std::atan(std::tan(phi0) / k);
            if (V <= 0) return 0.0;
        }
        return 4 * std::pow(e, 1 - beta) / P * layer_integral(k, 0.5 * (beta - 2), V);
    }
    if (h <= 0) {
        if (beta >= 1) return INFINITY;
        // e / P below rounding: int_0^{pi/2} sin^{-beta} = B((1 - beta) / 2, 1 / 2) / 2
        return 2 * std::pow(P, -beta) * std::tgamma(0.5 * (1 - beta)) * std::sqrt(std::numbers::pi) /
               std::tgamma(1 - 0.5 * beta);
    }
    double s2 = (h * h - e * e) / (P * P - e * e);
    double phi0 = std::asin(std::sqrt(std::min(1.0, s2)));
    auto f = [&](double phi) {
        double c = std::cos(phi), sn = std::sin(phi);
        return std::pow(e * e * c * c + P * P * sn * sn, -0.5 * beta);
    };
    return 4 * ts().integrate(f, phi0, half_pi, kTol);
}

double kernel_3d(double beta, double r, double rho, double h) {
    const double e = std::abs(r - rho);
    const double P = r + rho;
    if (h >= P) return 0.0;
    if (r == 0 || rho == 0) return 4 * std::numbers::pi * std::pow(P, -beta);
    double lo = std::max(e, h);
    if (lo == 0) return beta < 2 ? 2 * std::numbers::pi / (r * rho) * std::pow(P, 2 - beta) / (2 - beta) : INFINITY;
    double val;
    if (std::abs(2 - beta) < 1e-12) {
        val = std::log(P / lo);
    } else {
        const double gap = lo == e ? 2 * std::min(r, rho) : P - lo;
        const double L = std::log1p(gap / lo);
        val = std::pow(lo, 2 - beta) * std::expm1((2 - beta) * L) / (2 - beta);
    }
    return 2 * std::numbers::pi / (r * rho) * val;
}

}  // namespace

double sphere_area(int N) {
    return 2 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double shell_kernel(int N, double beta, double r, double rho, double h) {
    switch (N) {
        case 1: {
            double e = std::abs(r - rho), P = r + rho, k = 0;
            if (e >= h) k += e > 0 ? std::pow(e, -beta) : INFINITY;
            if (P >= h) k += P > 0 ? std::pow(P, -beta) : INFINITY;
            return k;
        }
        case 2: return kernel_2d(beta, r, rho, h);
        case 3: return kernel_3d(beta, r, rho, h);
        default: throw std::invalid_argument("radial kernels are implemented for N <= 3");
    }
}

}  // namespace frackpz

#include <boost/math/quadrature/exp_sinh.hpp>

namespace frackpz {

double exterior_tail(int N, double beta, double r, double R) {
    if (N == 1) {
        return (std::pow(R - r, 1 - beta) + std::pow(R + r, 1 - beta)) / (beta - 1);
    }
    const double d = R - r;
    thread_local boost::math::quadrature::exp_sinh<double> es;
    // rho = r + d e^t concentrates nodes at the near edge
    auto f = [&](double t) {
        if (t > 200) return 0.0;
        double g = d * std::exp(t);
        double rho = r + g;
        return shell_kernel(N, beta, r, rho) * std::pow(rho, N - 1) * g;
    };
    return es.integrate(f, 1e-11);
}

}  // namespace frackpz
