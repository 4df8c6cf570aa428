#include "frackpz/operators/radial_reduced.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <stdexcept>

#include "frackpz/core/shell_kernel.hpp"
#include "frackpz/operators/constants.hpp"

namespace frackpz {

double reduced_kernel(int N, double s, double sigma) {
    if (!(sigma > 1)) throw std::invalid_argument("H is defined for sigma > 1");
    return std::pow(sigma, N - 2) * std::pow(sigma * sigma - 1, 1 + 2 * s) * shell_kernel(N, N + 2 * s, 1.0, sigma);
}

double fraclap_radial_reduced(const std::function<double(double)>& w, int N, double s, double r,
                              const std::vector<double>& kinks) {
    if (!(r > 0)) throw std::invalid_argument("the reduction needs r > 0");
    const double wr = w(r);
    auto g = [&](double sig) {
        double br = (wr - w(sig * r)) + (wr - w(r / sig)) * std::pow(sig, 2 * s - N);
        return br * std::pow(sig, N - 1) * shell_kernel(N, N + 2 * s, 1.0, sig);
    };
    const double tau = 1e-3;
    std::vector<double> pts{1 + tau};
    for (double k : kinks) {
        if (!(k > 0)) continue;
        for (double sg : {k / r, r / k})
            if (sg > 1 + tau) pts.push_back(sg);
    }
    for (double e = 2 * tau; e < 64; e *= 4) pts.push_back(1 + e);
    std::sort(pts.begin(), pts.end());
    pts.push_back(2 * pts.back() + 1);

    thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    thread_local boost::math::quadrature::exp_sinh<double> es;
    // g ~ c1 e^{1-2s} + c2 e^{2-2s} for e = sigma - 1 -> 0
    const double p = 1 - 2 * s;
    const double g1 = g(1 + tau) * std::pow(tau, -p), g2 = g(1 + 2 * tau) * std::pow(2 * tau, -p);
    const double c2 = (g2 - g1) / tau, c1 = g1 - c2 * tau;
    double total = c1 * std::pow(tau, p + 1) / (p + 1) + c2 * std::pow(tau, p + 2) / (p + 2);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (pts[k + 1] > pts[k]) total += ts.integrate(g, pts[k], pts[k + 1], 1e-10);
    const double top = pts.back();
    // sigma = top e^t turns the algebraic decay into an exponential one
    total += es.integrate(
        [&](double t) {
            if (t > 150) return 0.0;
            double sg = top * std::exp(t);
            return g(sg) * sg;
        },
        1e-10);
    return normalization_constant(N, s) * std::pow(r, -2 * s) * total;
}

}  // namespace frackpz
