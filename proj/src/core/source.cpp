#include "frackpz/core/source.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frackpz {

SourceSpec SourceSpec::constant(double c) {
    SourceSpec f;
    f.kind = Kind::Constant;
    f.value = c;
    return f;
}

SourceSpec SourceSpec::power(double theta, double amplitude) {
    if (!(theta >= 0)) throw std::invalid_argument("power source needs theta >= 0");
    SourceSpec f;
    f.kind = Kind::Power;
    f.theta = theta;
    f.value = amplitude;
    return f;
}

SourceSpec SourceSpec::indicator(double lo, double hi, double amplitude) {
    if (!(lo < hi)) throw std::invalid_argument("indicator needs lo < hi");
    SourceSpec f;
    f.kind = Kind::Indicator;
    f.lo = lo;
    f.hi = hi;
    f.value = amplitude;
    return f;
}

SourceSpec SourceSpec::ball_indicator(double radius, double amplitude) {
    return indicator(-radius, radius, amplitude);
}

SourceSpec SourceSpec::tabulated(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated source needs matching x/y arrays of length >= 2");
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw std::invalid_argument("tabulated source abscissae must be sorted");
    SourceSpec f;
    f.kind = Kind::Tabulated;
    f.xs = std::move(xs);
    f.ys = std::move(ys);
    return f;
}

double SourceSpec::operator()(double x) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::Power: return x == 0 ? INFINITY : value * std::pow(std::abs(x), -theta);
        case Kind::Indicator: return (x >= lo && x <= hi) ? value : 0.0;
        case Kind::Tabulated: {
            if (x <= xs.front()) return ys.front();
            if (x >= xs.back()) return ys.back();
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            std::size_t j = it - xs.begin();
            double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
            return (1 - w) * ys[j - 1] + w * ys[j];
        }
    }
    return 0;
}

GridFunction SourceSpec::evaluate(const GridPtr& g) const {
    GridFunction f(g);
    const int N = g->dim();
    for (int i = 0; i < g->size(); ++i) {
        if (g->is_boundary(i)) continue;
        double x = g->node(i);
        if (kind == Kind::Power && x == 0) {
            if (theta >= N) throw std::invalid_argument("power source not locally integrable");
            f[i] = value * N / (N - theta) * std::pow(0.5 * g->h(), -theta);
        } else if (kind == Kind::Indicator && g->radial()) {
            f[i] = x <= hi ? value : 0.0;
        } else {
            f[i] = (*this)(x);
        }
    }
    return f;
}

bool SourceSpec::nonnegative() const {
    switch (kind) {
        case Kind::Constant:
        case Kind::Power:
        case Kind::Indicator: return value >= 0;
        case Kind::Tabulated: return std::all_of(ys.begin(), ys.end(), [](double y) { return y >= 0; });
    }
    return false;
}

std::string SourceSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Constant: os << "constant(" << value << ")"; break;
        case Kind::Power: os << "power(theta=" << theta << ", amplitude=" << value << ")"; break;
        case Kind::Indicator: os << "indicator[" << lo << "," << hi << "](" << value << ")"; break;
        case Kind::Tabulated: os << "tabulated(" << xs.size() << " points)"; break;
    }
    return os.str();
}

}  // namespace frackpz
