#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/params.hpp"
#include "frackpz/core/source.hpp"
#include "frackpz/operators/green.hpp"

namespace frackpz {

inline constexpr unsigned kDefaultSeed = 12345;

/// One sampled pair of a Green bound check.
struct BoundSample {
    double dist = 0;   // |x - y|
    double dx = 0;     // d(x)
    double dy = 0;     // d(y)
    double ratio = 0;  // G / bound
    double grad_ratio = -1;  // |grad_x G| |x-y|^{N-2s+1}; negative when not sampled
    int branch = 0;    // 0: |x-y|^{2s-N}, 1: d(x)^s term, 2: d(y)^s term
};

struct BoundCheckReport {
    int grid_n = 0;
    int samples = 0;
    int excluded = 0;
    int violations = 0;
    double fitted_constant = 0;
    double worst_ratio = 0;
    int grad_samples = 0;
    int grad_violations = 0;
    double grad_fitted_constant = 0;
    std::array<int, 3> branch_counts{};
    double symmetry_error = 0;
    unsigned seed = kDefaultSeed;
    bool pass = false;
    std::vector<BoundSample> scatter;
};

/// Samples G(x,y) / min{|x-y|^{2s-N}, d(x)^s |x-y|^{s-N}, d(y)^s |x-y|^{s-N}} and
/// |grad_x G| |x-y|^{N-2s+1} over random pairs of the ball. Pairs closer than 2h
/// are excluded, gradient samples also need d(x) >= 2h.
BoundCheckReport check_green_bounds(const BallGreenKernel& kernel, int samples = 10000,
                                    unsigned seed = kDefaultSeed);

struct GreenRefinement {
    std::vector<BoundCheckReport> levels;
    double drift = 0;       // max/min ratio of the fitted constants
    double grad_drift = 0;
    bool pass = false;
};

/// check_green_bounds on each grid; pass when every level is finite with zero
/// violations and the constants drift by less than 2x.
GreenRefinement check_green_bounds_refinement(int N, double s, const std::vector<int>& grid_ns,
                                              int samples = 10000, unsigned seed = kDefaultSeed);

struct M00Report {
    std::vector<int> grid_ns;
    std::vector<double> C1;  // per refinement level
    double drift = 1;
    bool pass = false;
    std::string note;
};

/// max over box nodes of I_{2s-1}((I_{2s-1} f0)^q) / I_{2s-1} f0 at grid_n and
/// 2 grid_n - 1; pass when finite and within 2x of each other.
M00Report check_m00(const SourceSpec& f, const ProblemParams& p);

struct HardyReport {
    double constant = 0;
    int grid_n = 0;
    int weighted_nodes = 0;
};

/// Smallest generalized eigenvalue of (Gagliardo form, sum phi^2 d^{-2s} mu).
HardyReport hardy_constant(const ProblemParams& p);

enum class ComparisonVerdict { Holds, Violated, Inconclusive };
std::string to_string(ComparisonVerdict v);

/// H(x, xi) with a per-node bound b on its Lipschitz constant in xi.
using Hamiltonian = std::function<double(double x, double xi)>;

struct ComparisonInput {
    GridFunction w1, w2;
    /// Optional precomputed (-Delta)^s w; computed when empty.
    GridFunction lap1, lap2;
    /// Optional signed derivatives; finite differences of w when empty.
    GridFunction grad1, grad2;
    Hamiltonian H;
    GridFunction b;
    GridFunction g;
    double s = 0.75;
    double tol_rel = 1e-6;
    double tol_mono_rel = 1e-8;
    std::vector<int> excluded;  // nodes skipped by the hypothesis checks
};

struct ComparisonReport {
    ComparisonVerdict verdict = ComparisonVerdict::Inconclusive;
    bool sub_ok = false, super_ok = false, lipschitz_ok = false;
    double sub_residual = 0;    // max of (-Delta)^s w1 - H - g
    double super_residual = 0;  // min of (-Delta)^s w2 - H - g
    double min_gap = 0;         // min (w2 - w1)
    std::vector<std::string> failed;
};

/// Checks the sub/supersolution hypotheses first and asserts w2 >= w1 only
/// when they all hold.
ComparisonReport comparison_check(const ComparisonInput& in);

/// Lipschitz bound of |xi|^q between the gradients of w1 and w2.
GridFunction power_lipschitz_bound(const GridFunction& w1, const GridFunction& w2, double q);

struct RegularityReport {
    std::vector<double> sigmas;
    std::vector<std::vector<double>> norms;   // [level][sigma]
    std::vector<double> growth;                // worst relative growth per sigma
    double threshold = kInf;                   // kInf when no sigma grows
    double predicted_cap = kInf;
    bool within_window = false;                // threshold in [0.7, 1.3] cap
};

/// ||du||_{L^sigma} on each refinement level; the threshold is the last sigma
/// before the first one whose norm grows by 25% or more.
RegularityReport regularity_probe(const std::vector<GridFunction>& levels, double predicted_cap,
                                  const std::vector<double>& sigmas);

struct MarcinkiewiczReport {
    std::vector<double> strong, weak;  // per level
};

MarcinkiewiczReport marcinkiewicz_probe(const std::vector<GridFunction>& gradients, double p);

struct BootstrapReport {
    std::vector<double> r;
    double threshold = 0;  // sigma N / ((2s-1) sigma - N)
    bool exited = false;
    bool increasing = true;
    int steps = 0;
};

/// r_{n+1} = N sigma r_n / (N sigma - r_n (sigma (2s-1) - N)) until r_n reaches the threshold.
BootstrapReport exponent_bootstrap(int N, double sigma, double s, double r1, int max_steps = 10000);

struct SingularWeightReport {
    double alpha = 0;
    std::vector<double> n_values;
    std::vector<double> sup_norms;
    bool monotone = true;
    double last_decade_growth = 0;
    bool saturated = false;
    double beta_threshold = 0;  // max{s / (2s - alpha), 1}
    double beta_high = 0, beta_low = 0;
    std::vector<int> grid_ns;
    std::vector<double> seminorm_high, seminorm_low;  // per grid level at the largest n
    /// Last relative increment; stable means increments shrink geometrically and stay below 10%.
    double growth_high = 0, growth_low = 0;
    bool high_stable = false, low_growing = false;
    bool pass = false;
};

/// Solves (-Delta)^s rho_n = 1 / (d^alpha + 1/n) for n = 10, ..., 10^4 and probes
/// the seminorm of rho^beta above and below the threshold on three grids.
SingularWeightReport singular_weight_study(double alpha, const ProblemParams& p);

}  // namespace frackpz
