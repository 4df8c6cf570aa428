#pragma once

#include <functional>
#include <vector>

namespace frackpz {

/// H(sigma) = sigma^{N-2} (sigma^2-1)^{1+2s} K(1, sigma), K the angular
/// integral of |e_1 - sigma w|^{-N-2s} over the unit sphere.
double reduced_kernel(int N, double s, double sigma);

/// (-Delta)^s w(r) for a radial profile w with compact support, through
///   a_{N,s} r^{-2s} int_1^inf [(w(r)-w(sigma r)) + (w(r)-w(r/sigma)) sigma^{2s-N}]
///                       sigma (sigma^2-1)^{-1-2s} H(sigma) dsigma.
/// kinks lists radii where w is not smooth (support edge included).
double fraclap_radial_reduced(const std::function<double(double)>& w, int N, double s, double r,
                              const std::vector<double>& kinks);

}  // namespace frackpz
