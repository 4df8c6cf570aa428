#include "frackpz/operators/green.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "frackpz/core/parallel.hpp"
#include "frackpz/core/shell_kernel.hpp"
#include "frackpz/operators/constants.hpp"
#include "quad.hpp"

namespace frackpz {

namespace {

constexpr double kZetaSpan = 40.0;
constexpr double kZetaStep = 1.0 / 64;
constexpr double kGeomRatio = 4.0;

/// int_0^L g(t) dt for g peaked at t = 0 with width c, on geometric panels.
/// With exact = false the peak is a singularity of order t^{p}, p > -1,
/// and the first panel is integrated from that power law.
template <class F>
double peaked_integral(F&& g, double L, double c, bool singular, double p) {
    const auto& rule = detail::gauss_rule(8);
    auto panel = [&](double a, double b) {
        double acc = 0;
        for (std::size_t k = 0; k < rule.x.size(); ++k) acc += rule.w[k] * g(a + (b - a) * rule.x[k]);
        return acc * (b - a);
    };
    double c0 = std::min(L, std::max(c, 1e-14 * L));
    double total = singular ? g(c0) * c0 / (p + 1) : panel(0, c0);
    double a = c0;
    while (a < L) {
        double b = std::min(L, a * kGeomRatio);
        if (L - b < 0.5 * (b - a)) b = L;
        total += panel(a, b);
        a = b;
    }
    return total;
}

}  // namespace

BallGreenFunction::BallGreenFunction(int N, double s, double R, double kappa)
    : N_(N), s_(s), R_(R), kappa_(kappa) {
    if (N < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(s > 0 && s < 1)) throw std::invalid_argument("s must lie in (0, 1)");
    if (std::abs(0.5 * N - s) < 1e-12) throw std::invalid_argument("s = N/2 is not supported");
    if (!(R > 0)) throw std::invalid_argument("ball radius must be positive");
    zeta0_ = -kZetaSpan;
    dzeta_ = kZetaStep;
    const int m = static_cast<int>(std::lround(2 * kZetaSpan / kZetaStep)) + 1;
    tab_.resize(m);
    dtab_.resize(m);
    for (int i = 0; i < m; ++i) {
        double z = std::exp(zeta0_ + i * dzeta_);
        tab_[i] = profile_exact(z);
        dtab_[i] = std::pow(z, s_) * std::pow(1 + z, -0.5 * N_);
    }
}

double BallGreenFunction::profile_exact(double z) const {
    if (z <= 0) return 0.0;
    if (std::isinf(z)) return 0.5 * N_ > s_ ? std::beta(s_, 0.5 * N_ - s_) : INFINITY;
    const double x = z / (1 + z), y = 1 / (1 + z);
    // incomplete beta B_x(a, b), through the complement when x is close to 1
    auto incb = [&](double a, double b) {
        if (x <= 0.5) return boost::math::beta(a, b, x);
        return std::beta(a, b) - boost::math::beta(b, a, y);
    };
    const double b = 0.5 * N_ - s_;
    if (b > 0) return incb(s_, b);
    // B_x(a,b) = [(a+b) B_x(a,b+1) - x^a (1-x)^b] / b for b < 0
    return ((s_ + b) * incb(s_, b + 1) - std::pow(x, s_) * std::pow(y, b)) / b;
}

double BallGreenFunction::profile(double z) const {
    if (z <= 0) return 0.0;
    const double zeta = std::log(z);
    if (zeta <= zeta0_) return std::pow(z, s_) / s_ * (1 - 0.5 * N_ * s_ / (s_ + 1) * z);
    const int m = static_cast<int>(tab_.size());
    const double zeta_end = zeta0_ + (m - 1) * dzeta_;
    if (zeta >= zeta_end) {
        const double c = s_ - 0.5 * N_;
        return tab_[m - 1] + (std::pow(z, c) - std::exp(c * zeta_end)) / c;
    }
    double t = (zeta - zeta0_) / dzeta_;
    int i = std::min(static_cast<int>(t), m - 2);
    t -= i;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * tab_[i] + (t3 - 2 * t2 + t) * dzeta_ * dtab_[i] +
           (-2 * t3 + 3 * t2) * tab_[i + 1] + (t3 - t2) * dzeta_ * dtab_[i + 1];
}

double BallGreenFunction::value(double d, double A) const {
    if (A <= 0) return 0.0;
    const double R2 = R_ * R_;
    if (d == 0) {
        if (N_ == 1) return kappa_ * std::pow(A / R2, s_ - 0.5) / (s_ - 0.5);
        return INFINITY;
    }
    const double z = A / (R2 * d * d);
    return kappa_ * std::pow(d, 2 * s_ - N_) * profile(z);
}

double BallGreenFunction::operator()(const double* x, const double* y) const {
    double x2 = 0, y2 = 0, d2 = 0;
    for (int k = 0; k < N_; ++k) {
        x2 += x[k] * x[k];
        y2 += y[k] * y[k];
        d2 += (x[k] - y[k]) * (x[k] - y[k]);
    }
    const double R2 = R_ * R_;
    return value(std::sqrt(d2), (R2 - x2) * (R2 - y2));
}

double BallGreenFunction::sphere_integral(double r, double rho) const {
    const double R2 = R_ * R_;
    const double A = (R2 - r * r) * (R2 - rho * rho);
    if (A <= 0) return 0.0;
    const double e = std::abs(r - rho), P = r + rho;
    if (N_ == 1) return value(e, A) + value(P, A);
    if (r == 0 || rho == 0) return sphere_area(N_) * value(P, A);
    if (N_ == 2) {
        // |r e1 - rho w|^2 = e^2 cos^2 phi + P^2 sin^2 phi over phi in [0, pi/2]
        auto g = [&](double phi) {
            double c = std::cos(phi), sn = std::sin(phi);
            return value(std::sqrt(e * e * c * c + P * P * sn * sn), A);
        };
        return 4 * peaked_integral(g, 0.5 * std::numbers::pi, e / P, e == 0, 2 * s_ - 2);
    }
    if (N_ == 3) {
        auto g = [&](double t) {
            double d = e + t;
            return value(d, A) * d;
        };
        return 2 * std::numbers::pi / (r * rho) * peaked_integral(g, P - e, e, e == 0, 2 * s_ - 2);
    }
    throw std::invalid_argument("radial Green kernels are implemented for N <= 3");
}

BallGreenKernel::BallGreenKernel(GridPtr g, double s, double kappa)
    : grid_(std::move(g)), s_(s), fn_(grid_->dim(), s, grid_->domain().R, kappa) {
    if (!grid_->radial()) throw std::invalid_argument("Green kernels need a ball grid");
    const Grid& gr = *grid_;
    const int n = gr.size(), N = gr.dim();
    const double h = gr.h();
    G_.setZero(n, n);
    W_.setZero(n, n);
    parallel_for(n - 1, [&](int i) {
        for (int j = i; j < n - 1; ++j) G_(i, j) = fn_.sphere_integral(gr.node(i), gr.node(j));
        const double x = gr.node(i);
        auto kden = [&](double y) { return std::pow(y, N - 1) * fn_.sphere_integral(x, y); };
        for (int j = 0; j + 1 < n; ++j) {
            const double y0 = gr.node(j);
            const double gap = std::max({0.0, y0 - x, x - (y0 + h)}) / h;
            const detail::Rule* rule;
            if (gap < 1 || j == n - 2) rule = &detail::de_rule();
            else if (gap <= 3) rule = &detail::gauss_rule(16);
            else if (gap <= 12) rule = &detail::gauss_rule(8);
            else rule = &detail::gauss_rule(4);
            auto m = detail::cell_moments(kden, y0, h, *rule);
            W_(i, j) += m[0];
            // data at the boundary node is taken as its interior limit
            W_(i, j + 1 == n - 1 ? j : j + 1) += m[1];
        }
    });
    G_ = G_.selfadjointView<Eigen::Upper>();
}

double BallGreenKernel::fitted_kappa() const {
    const Grid& gr = *grid_;
    const int n = gr.size();
    const double R = gr.domain().R;
    Eigen::VectorXd f = Eigen::VectorXd::Constant(n, getoor_constant(gr.dim(), s_));
    Eigen::VectorXd v = W_ * f;
    double num = 0, den = 0;
    for (int i = 0; i < n - 1; ++i) {
        double t = std::pow(R * R - gr.node(i) * gr.node(i), s_);
        num += t * v[i];
        den += v[i] * v[i];
    }
    return fn_.kappa() * num / den;
}

std::shared_ptr<const BallGreenKernel> BallGreenKernel::get(const GridPtr& g, double s) {
    static std::map<std::string, std::shared_ptr<const BallGreenKernel>> cache;
    static std::mutex mu;
    const DomainSpec& d = g->domain();
    std::ostringstream key;
    key << std::hexfloat << d.R << ':' << d.grid_n << ':' << g->dim() << ':' << s;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key.str());
        if (it != cache.end()) return it->second;
    }
    auto K = std::make_shared<BallGreenKernel>(g, s, 1.0);
    const double kappa = K->fitted_kappa();
    K->fn_.set_kappa(kappa);
    K->G_ *= kappa;
    K->W_ *= kappa;
    std::shared_ptr<const BallGreenKernel> out = K;
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key.str(), out).first->second;
}

GridFunction BallGreenKernel::apply(const GridFunction& f) const {
    GridFunction v(grid_, W_ * f.values());
    v.clamp_boundary();
    return v;
}

std::shared_ptr<const BallGreenKernel> ball_green_build(const ProblemParams& p) {
    p.validate();
    if (p.domain.kind != DomainKind::Ball)
        throw std::invalid_argument("Green kernels are only available on balls; use linear_solve");
    return BallGreenKernel::get(Grid::make(p.domain, p.N), p.s);
}

GridFunction green_solve(const GridFunction& f, double s) {
    if (!f.grid()->radial())
        throw std::invalid_argument("Green kernels are only available on balls; use linear_solve");
    return BallGreenKernel::get(f.grid(), s)->apply(f);
}

}  // namespace frackpz
