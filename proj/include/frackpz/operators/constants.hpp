#pragma once

namespace frackpz {

/// a_{N,s} such that a_{N,s} P.V. int (u(x)-u(y))/|x-y|^{N+2s} dy has Fourier
/// symbol |xi|^{2s}: 4^s pi^{-N/2} Gamma((N+2s)/2) / |Gamma(-s)|.
double normalization_constant(int N, double s);

/// (-Delta)^s (1-|x|^2)_+^s = getoor_constant(N, s) on the unit ball.
double getoor_constant(int N, double s);

/// c_alpha with c_alpha I_alpha the inverse of (-Delta)^{alpha/2} on R^N.
double riesz_constant(int N, double alpha);

/// Tabulated unit-ball Green constant Gamma(N/2) / (4^s pi^{N/2} Gamma(s)^2).
double green_kappa_reference(int N, double s);

}  // namespace frackpz
