#pragma once

#include <string>
#include <vector>

#include "frackpz/core/grid.hpp"

namespace frackpz {

/// Forcing term f. Power sources |x|^{-theta} are centred at the origin;
/// the node sitting on the singularity receives the average over its cell.
struct SourceSpec {
    enum class Kind { Constant, Power, Indicator, Tabulated };
    Kind kind = Kind::Constant;
    double value = 1.0;  // constant level, or amplitude for the other kinds
    double theta = 0.0;
    double lo = -0.5, hi = 0.5;  // indicator support; radial grids use |x| < hi
    std::vector<double> xs, ys;

    static SourceSpec constant(double c);
    static SourceSpec power(double theta, double amplitude = 1.0);
    static SourceSpec indicator(double lo, double hi, double amplitude = 1.0);
    static SourceSpec ball_indicator(double radius, double amplitude = 1.0);
    static SourceSpec tabulated(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    GridFunction evaluate(const GridPtr& g) const;
    bool nonnegative() const;
    std::string describe() const;
};

}  // namespace frackpz
