#pragma once

namespace frackpz {

/// Surface area of the unit sphere S^{N-1}.
double sphere_area(int N);

/// Angular shell kernel
///   K(r, rho) = int_{S^{N-1}} |r e_1 - rho w|^{-beta} 1{|r e_1 - rho w| >= h} dw
/// for N in {1, 2, 3}. h = 0 gives the unrestricted kernel, which is
/// infinite on the diagonal r = rho.
double shell_kernel(int N, double beta, double r, double rho, double h = 0.0);

}  // namespace frackpz

namespace frackpz {

/// int_{|y| > R} |x - y|^{-beta} dy for |x| = r < R, as the radial integral
/// of rho^{N-1} K(r, rho) over (R, inf). Requires beta > N.
double exterior_tail(int N, double beta, double r, double R);

}  // namespace frackpz
