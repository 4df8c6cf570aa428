#include "frackpz/operators/fraclap.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "frackpz/core/parallel.hpp"
#include "frackpz/core/shell_kernel.hpp"
#include "frackpz/operators/constants.hpp"
#include "quad.hpp"

namespace frackpz {

namespace {

using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& ts() {
    thread_local tanh_sinh<double> q(14);
    return q;
}

constexpr double kTol = 1e-11;
// w(x) - M(t) carries cancellation noise of relative size ~1e-16 (d/t)^2
constexpr double kNearTol = 1e-9;

/// w = l^s with l the quadratic distance proxy of the domain.
struct Weight {
    bool radial;
    double a, b, R, s;

    explicit Weight(const Grid& g, double s_)
        : radial(g.radial()), a(g.domain().a), b(g.domain().b), R(g.domain().R), s(s_) {}

    double l(double y) const { return radial ? (R * R - y * y) / (2 * R) : (y - a) * (b - y) / (b - a); }
    double dl(double y) const { return radial ? -y / R : (a + b - 2 * y) / (b - a); }
    double d2l() const { return radial ? -1 / R : -2 / (b - a); }
    double w(double y) const {
        double L = l(y);
        return L > 0 ? std::pow(L, s) : 0.0;
    }
    double dw(double y) const { return s * std::pow(l(y), s - 1) * dl(y); }
    double d2w(double y) const {
        double L = l(y), D = dl(y);
        return s * (s - 1) * std::pow(L, s - 2) * D * D + s * std::pow(L, s - 1) * d2l();
    }
};

double symbol_interval(const Weight& W, double s, double x) {
    const double beta = 1 + 2 * s;
    const double d = std::min(x - W.a, W.b - x);
    const double delta = 0.5 * d, tau = 1e-3 * delta;
    const double wx = W.w(x);
    double near = -W.d2w(x) * std::pow(tau, 2 - 2 * s) / (2 - 2 * s);
    near += ts().integrate(
        [&](double t) { return (2 * wx - W.w(x + t) - W.w(x - t)) * std::pow(t, -beta); }, tau, delta, kTol);
    double far = ts().integrate([&](double y) { return (wx - W.w(y)) * std::pow(x - y, -beta); }, W.a,
                                x - delta, kTol);
    far += ts().integrate([&](double y) { return (wx - W.w(y)) * std::pow(y - x, -beta); }, x + delta,
                          W.b, kTol);
    double tail = wx * (std::pow(x - W.a, -2 * s) + std::pow(W.b - x, -2 * s)) / (2 * s);
    return near + far + tail;
}

/// Mean of w over the sphere of radius t about the point r e_1.
double sphere_mean(const Weight& W, int N, double r, double t) {
    if (N == 1) return 0.5 * (W.w(r + t) + W.w(std::abs(r - t)));
    if (N == 2) {
        const int M = 64;
        double acc = 0;
        for (int k = 0; k < M; ++k) {
            double c = std::cos(2 * std::numbers::pi * k / M);
            acc += W.w(std::sqrt(std::max(0.0, r * r + t * t + 2 * r * t * c)));
        }
        return acc / M;
    }
    const auto& g = detail::gauss_rule(32);
    double acc = 0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
        double mu = 2 * g.x[k] - 1;
        acc += g.w[k] * W.w(std::sqrt(std::max(0.0, r * r + t * t + 2 * r * t * mu)));
    }
    return acc;
}

double symbol_radial(const Weight& W, int N, double s, double r) {
    const double beta = N + 2 * s;
    const double S = sphere_area(N);
    const double R = W.R;
    const double delta = 0.5 * (R - r), tau = 1e-3 * delta;
    const double wx = W.w(r);
    const double lap = r > 0 ? W.d2w(r) + (N - 1) * W.dw(r) / r : N * W.d2w(0.0);
    double near = -lap * std::pow(tau, 2 - 2 * s) / (2 * N * (2 - 2 * s));
    near += ts().integrate([&](double t) { return (wx - sphere_mean(W, N, r, t)) * std::pow(t, -1 - 2 * s); },
                           tau, delta, kNearTol);
    near *= S;
    auto g = [&](double rho) { return std::pow(rho, N - 1) * W.w(rho) * shell_kernel(N, beta, r, rho, delta); };
    // the restricted kernel has kinks at |rho - r| = delta and vanishes for rho < delta - r
    std::vector<double> cuts{0.0, r - delta, r, delta - r, r + delta, R};
    std::sort(cuts.begin(), cuts.end());
    double inner = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double lo = std::max(0.0, cuts[k]), hi = std::min(R, cuts[k + 1]);
        if (hi > lo) inner += ts().integrate(g, lo, hi, kTol);
    }
    return near + wx * S * std::pow(delta, -2 * s) / (2 * s) - inner;
}

std::map<std::string, std::shared_ptr<const FracLapMatrix>>& cache() {
    static std::map<std::string, std::shared_ptr<const FracLapMatrix>> c;
    return c;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double weight_symbol(const Grid& g, double s, double x) {
    Weight W(g, s);
    return g.radial() ? symbol_radial(W, g.dim(), s, std::abs(x)) : symbol_interval(W, s, x);
}

FracLapMatrix::FracLapMatrix(GridPtr g, double s, BoundaryMode mode)
    : grid_(std::move(g)), s_(s), a_(normalization_constant(grid_->dim(), s)), mode_(mode) {
    if (!(s > 0.5 && s < 1)) throw std::invalid_argument("fractional order must lie in (1/2, 1)");
    assemble();
}

std::shared_ptr<const FracLapMatrix> FracLapMatrix::get(const GridPtr& g, double s, BoundaryMode mode) {
    const DomainSpec& d = g->domain();
    std::ostringstream key;
    key << std::hexfloat << static_cast<int>(d.kind) << ':' << d.a << ':' << d.b << ':' << d.R << ':'
        << d.grid_n << ':' << g->dim() << ':' << s << ':' << static_cast<int>(mode);
    {
        std::lock_guard<std::mutex> lock(cache_mutex());
        auto it = cache().find(key.str());
        if (it != cache().end()) return it->second;
    }
    auto A = std::make_shared<const FracLapMatrix>(g, s, mode);
    std::lock_guard<std::mutex> lock(cache_mutex());
    return cache().emplace(key.str(), A).first->second;
}

void FracLapMatrix::assemble() {
    const Grid& g = *grid_;
    const int n = g.size();
    const int N = g.dim();
    const bool radial = g.radial();
    const double h = g.h();
    const double s = s_;
    const double beta = N + 2 * s;
    const int first = g.first_interior();
    const int m = g.interior_count();
    const Weight W(g, s);
    const bool weighted = mode_ == BoundaryMode::Distance;
    const double c_near = sphere_area(N) * std::pow(h, 2 - 2 * s) / (N * (2 - 2 * s));

    std::vector<double> wnode(n, 1.0);
    if (weighted)
        for (int j = 0; j < n; ++j) wnode[j] = g.is_boundary(j) ? 0.0 : W.w(g.node(j));

    A_.setZero(m, m);
    lam_.setZero(m);

    // Zero mode on intervals: translation-invariant correction keeps the matrix symmetric
    double q_line = 0;
    const bool line_q = !radial && mode_ == BoundaryMode::Zero;
    if (line_q) {
        const int K = 4096;
        const auto& rule = detail::gauss_rule(16);
        for (int k = 1; k <= K; ++k)
            for (std::size_t l = 0; l < rule.x.size(); ++l) {
                double t = rule.x[l];
                q_line += rule.w[l] * 0.5 * t * (1 - t) * std::pow(k + t, -beta);
            }
        q_line += std::pow(K + 1.0, 1 - beta) / (12 * (beta - 1));
        q_line *= 2 * std::pow(h, 3 - beta);
    }

    parallel_for(m, [&](int row) {
        const int i = first + row;
        const double x = g.node(i);
        std::vector<double> c(n, 0.0);

        auto kden = [&](double y) {
            if (radial) return std::pow(y, N - 1) * shell_kernel(N, beta, x, y, h);
            double e = std::abs(x - y);
            return e >= h ? std::pow(e, -beta) : 0.0;
        };
        auto gfun = [&](double y) { return (weighted ? W.w(y) : 1.0) * kden(y); };

        double Q = 0;
        for (int j = 0; j + 1 < n; ++j) {
            const bool band = (j == i - 1 || j == i);
            if (band && !radial) continue;
            const double y0 = g.node(j);
            const double gap = std::max({0.0, y0 - x, x - (y0 + h)}) / h;
            const bool edge = weighted && (j == n - 2 || (!radial && j == 0));
            const detail::Rule* rule;
            if (band || edge) rule = &detail::de_rule();
            else if (gap <= 3) rule = &detail::gauss_rule(16);
            else if (gap <= 12) rule = &detail::gauss_rule(8);
            else rule = &detail::gauss_rule(4);
            auto mom = detail::cell_moments(gfun, y0, h, *rule);
            c[i] += mom[0] + mom[1];
            c[j] -= mom[0];
            c[j + 1] -= mom[1];
            Q += mom[2];
        }
        if (line_q) Q = q_line;

        double lam;
        if (weighted) {
            lam = radial ? symbol_radial(W, N, s, x) : symbol_interval(W, s, x);
        } else if (radial) {
            lam = exterior_tail(N, beta, x, g.domain().R);
        } else {
            lam = (std::pow(x - g.domain().a, -2 * s) + std::pow(g.domain().b - x, -2 * s)) / (2 * s);
        }
        lam_[row] = lam;
        c[i] += lam;

        // second-order terms: Q v'' - c_near (w' v' + w lap(v) / 2)
        const double wi = weighted ? W.w(x) : 1.0;
        const double dwi = weighted ? W.dw(x) : 0.0;
        const double h2 = h * h;
        if (radial && i == 0) {
            double k = (Q - 0.5 * c_near * wi * N) * 2 / h2;
            c[0] -= k;
            c[1] += k;
        } else {
            const double k1 = -c_near * dwi;
            c[i - 1] += Q / h2 - k1 / (2 * h);
            c[i] -= 2 * Q / h2;
            c[i + 1] += Q / h2 + k1 / (2 * h);
            // radial Laplacian in flux form keeps the off-diagonal signs
            const double kl = -0.5 * c_near * wi;
            const double cp = radial ? std::pow((x + 0.5 * h) / x, N - 1) / h2 : 1 / h2;
            const double cm = radial ? std::pow((x - 0.5 * h) / x, N - 1) / h2 : 1 / h2;
            c[i - 1] += kl * cm;
            c[i] -= kl * (cp + cm);
            c[i + 1] += kl * cp;
        }

        // boundary nodes: extrapolate v from inside, or zero
        auto fold = [&](int b, int into) {
            if (mode_ != BoundaryMode::Zero) c[into] += c[b];
            c[b] = 0;
        };
        fold(n - 1, n - 2);
        if (!radial) fold(0, 1);

        for (int j = first; j < first + m; ++j) A_(row, j - first) = a_ * c[j] / wnode[j];
    });
}

GridFunction FracLapMatrix::apply(const GridFunction& u) const {
    if (u.grid()->size() != grid_->size()) throw std::invalid_argument("grid mismatch");
    return GridFunction::from_interior(u.grid(), A_ * u.interior());
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& FracLapMatrix::lu() const {
    std::call_once(lu_once_, [&] { lu_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(A_); });
    return *lu_;
}

Eigen::VectorXd FracLapMatrix::solve(const Eigen::VectorXd& g) const { return lu().solve(g); }

GridFunction FracLapMatrix::solve(const GridFunction& g) const {
    return GridFunction::from_interior(g.grid(), solve(g.interior()));
}

double FracLapMatrix::rcond() const { return lu().rcond(); }

GridFunction fraclap_direct(const GridFunction& u, const ProblemParams& p, BoundaryMode mode) {
    if (u.grid()->radial()) return fraclap_radial(u, p, mode);
    const Grid& g = *u.grid();
    if (u[0] != 0 || u[g.size() - 1] != 0)
        throw std::invalid_argument("exterior data must vanish: boundary nodes are non-zero");
    return FracLapMatrix::get(u.grid(), p.s, mode)->apply(u);
}

GridFunction fraclap_radial(const GridFunction& u, const ProblemParams& p, BoundaryMode mode) {
    if (!u.grid()->radial()) throw std::invalid_argument("fraclap_radial needs a ball grid");
    if (u.grid()->dim() != p.N) throw std::invalid_argument("grid dimension does not match N");
    if (u[u.size() - 1] != 0)
        throw std::invalid_argument("exterior data must vanish: boundary node is non-zero");
    return FracLapMatrix::get(u.grid(), p.s, mode)->apply(u);
}

GridFunction fraclap(const GridFunction& u, double s, BoundaryMode mode) {
    return FracLapMatrix::get(u.grid(), s, mode)->apply(u);
}

}  // namespace frackpz
