#include "frackpz/operators/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frackpz {

double normalization_constant(int N, double s) {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (!(s > 0 && s < 1)) throw std::invalid_argument("s must lie strictly between 0 and 1");
    return std::pow(4.0, s) * std::pow(std::numbers::pi, -0.5 * N) * std::tgamma(0.5 * N + s) /
           std::abs(std::tgamma(-s));
}

double getoor_constant(int N, double s) {
    return std::pow(4.0, s) * std::tgamma(1 + s) * std::tgamma(0.5 * N + s) / std::tgamma(0.5 * N);
}

double riesz_constant(int N, double alpha) {
    if (!(alpha > 0 && alpha < N)) throw std::invalid_argument("Riesz order must lie in (0, N)");
    return std::tgamma(0.5 * (N - alpha)) /
           (std::pow(2.0, alpha) * std::pow(std::numbers::pi, 0.5 * N) * std::tgamma(0.5 * alpha));
}

double green_kappa_reference(int N, double s) {
    double g = std::tgamma(s);
    return std::tgamma(0.5 * N) / (std::pow(4.0, s) * std::pow(std::numbers::pi, 0.5 * N) * g * g);
}

}  // namespace frackpz
