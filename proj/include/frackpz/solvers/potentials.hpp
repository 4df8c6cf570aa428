#pragma once

#include "frackpz/core/grid.hpp"
#include "frackpz/core/source.hpp"
#include "frackpz/operators/riesz.hpp"

namespace frackpz {

/// Enlarged grid with the same spacing, three times the size of the domain and
/// sharing its centre. Potentials of data supported in the domain live here.
class PotentialBox {
public:
    PotentialBox(const DomainSpec& dom, int N);

    const GridPtr& grid() const { return box_; }
    const GridPtr& domain_grid() const { return inner_; }
    /// Box index of domain node i.
    int index(int i) const { return i + offset_; }

    /// f on the box, zero off the open domain.
    GridFunction source(const SourceSpec& f) const;
    /// Extension by zero of a domain function.
    GridFunction extend(const GridFunction& u) const;
    /// Values at the domain nodes, boundary nodes set to 0.
    GridFunction restrict(const GridFunction& u) const;

private:
    GridPtr inner_, box_;
    int offset_ = 0;
};

/// max over box nodes of I_{2s-1}((I_{2s-1} f)^q) / I_{2s-1} f.
double m00_constant(const GridFunction& f_box, double s, double q);

}  // namespace frackpz
