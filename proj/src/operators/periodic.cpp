#include "frackpz/operators/periodic.hpp"

#include <complex>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace frackpz {

std::vector<double> fraclap_periodic(const std::vector<double>& u, double s, double period) {
    const std::size_t n = u.size();
    if (n < 2) throw std::invalid_argument("periodic grid needs at least two samples");
    if (!(period > 0)) throw std::invalid_argument("period must be positive");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> U;
    fft.fwd(U, u);
    const double k0 = 2 * std::numbers::pi / period;
    for (std::size_t k = 0; k < n; ++k) {
        long kk = k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        double xi = std::abs(kk * k0);
        U[k] *= xi == 0 ? 0.0 : std::pow(xi, 2 * s);
    }
    std::vector<double> out;
    fft.inv(out, U);
    return out;
}

}  // namespace frackpz
