#pragma once

#include <vector>

namespace frackpz {

/// Spectral (-Delta)^s of samples u(j L / n), j = 0..n-1, on a periodic grid of
/// period L: multiply the discrete Fourier coefficients by |xi|^{2s}.
std::vector<double> fraclap_periodic(const std::vector<double>& u, double s, double period);

}  // namespace frackpz
