#pragma once

#include <span>

#include "frackpz/core/grid.hpp"

namespace frackpz {

/// Pairwise summation, deterministic for a fixed input order.
double pairwise_sum(std::span<const double> x);

/// T_k: clamp to [-k, k].
GridFunction truncate(const GridFunction& u, double k);
/// G_k = u - T_k(u).
GridFunction remainder(const GridFunction& u, double k);

double lp_norm(const GridFunction& u, double p);
/// sup_t t |{|u| > t}|^{1/p} over the discrete level sets.
double weak_lp_norm(const GridFunction& u, double p);
/// Discrete H^s seminorm (double sum over node pairs, diagonal excluded).
/// include_exterior adds the interaction with the zero exterior, giving the
/// H^s_0 energy of the zero extension.
double gagliardo_seminorm(const GridFunction& u, double s, bool include_exterior = false);

/// Signed derivative (d/dx or d/dr): central differences inside, second-order
/// one-sided stencils next to the boundary, 0 on boundary nodes and at r = 0.
GridFunction finite_derivative(const GridFunction& u);
/// |grad u| on the grid.
GridFunction finite_gradient(const GridFunction& u);

GridFunction boundary_distance(const GridPtr& g);

}  // namespace frackpz
