#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/params.hpp"
#include "frackpz/core/source.hpp"
#include "frackpz/supersolutions/supersolutions.hpp"

namespace frackpz {

enum class SolveStatus { Converged, Nonconvergent, InvariantBreach, MonotonicityViolation };

std::string to_string(SolveStatus s);

struct SolverOptions {
    double tol_inner = 1e-8;
    double tol_outer = 1e-6;
    double omega = 0.5;
    int max_inner = 200;
    int max_outer = 40;  // n = 1, 2, 4, ..., 2^(max_outer-1)
    int max_iter = 500;  // Picard / Schauder iterations
    double tol_mono_rel = 1e-8;
    int snapshot_every = 1;
};

struct SolveReport {
    std::string solver;
    SolveStatus status = SolveStatus::Nonconvergent;
    bool converged = false;
    bool monotone_flag = true;
    Regime regime = Regime::Subcritical;
    int iterations = 0;
    GridFunction u;
    std::vector<GridFunction> iterates;
    std::vector<double> residual_l1, residual_linf;
    std::vector<double> gain_history;
    std::vector<double> norms_history;
    std::vector<double> differences;
    std::map<std::string, double> metrics;
    std::vector<std::string> notes;
};

/// (-Delta)^s v = g with zero exterior data, by the dense operator matrix.
/// Throws when the matrix is numerically singular.
GridFunction linear_solve(const GridFunction& g, const ProblemParams& p);

/// Discrete residual (-Delta)^s u - |du|^q - lambda f at interior nodes.
GridFunction equation_residual(const GridFunction& u, const ProblemParams& p, const GridFunction& f);

/// |xi|^q / (1 + |xi|^q / n).
double truncated_nonlinearity(double xi, double q, double n);

struct TruncatedStep {
    GridFunction u;
    int inner_iterations = 0;
    double inner_residual = 0;
    bool converged = false;
};

/// Damped fixed point for (-Delta)^s u = N_n(du) + lambda f started at u_prev.
TruncatedStep truncated_step(const GridFunction& u_prev, double n, const ProblemParams& p, const GridFunction& f,
                             const SolverOptions& opt = {});

/// Truncated problems for n = 1, 2, 4, ... until sup |u_2n - u_n| <= tol_outer.
SolveReport monotone_iteration(const ProblemParams& p, const SourceSpec& f, const Supersolution* w_super = nullptr,
                               const SolverOptions& opt = {});

struct GainRecursion {
    std::vector<double> a;
    double limit = kInf;
    double threshold = 0;  // q'^{1-q} / (q C^q)
    bool threshold_ok = false;
    bool diverged = false;
};

/// a_1 = C, a_{k+1} = C (C1 a_k^q + 1).
GainRecursion gain_recursion(double C, double C1, double q, int k_max = 100);

/// u_{k+1} = c_{2s} I_{2s}(|du_k|^q + lambda f) on a box of three times the
/// domain radius. C1 is the (m00) constant of f; pass a negative value to measure it.
SolveReport picard_potential(const ProblemParams& p, const SourceSpec& f, double C1 = -1, const SolverOptions& opt = {});

struct LambdaStar {
    double exponent = 0;  // 1/(2s) critical, 1/q supercritical
    double l = 0;
    double lambda_star = 0;
};

/// Maximizes (l^e - C0 l) / (C0 ||f||_m) over l.
LambdaStar schauder_lambda_star(double exponent, double norm_f_m, double C0);
LambdaStar schauder_lambda_star(const ProblemParams& p, double norm_f_m, double C0);

/// Smallest l with C0 (l + lambda ||f||) = l^e; NaN when lambda > lambda*.
double schauder_level(double exponent, double norm_f_m, double C0, double lambda);

/// u <- linear_solve(|du|^{q_eff} + lambda f) from u = 0, checking
/// ||du||_{L^{q_eff m}} <= l^{1/q_eff} at every iterate.
SolveReport schauder_iterate(const ProblemParams& p, const SourceSpec& f, double l, double lambda,
                             const SolverOptions& opt = {});

struct C0Measurement {
    double C0 = 0;
    std::string probe;
    std::vector<std::pair<std::string, double>> ratios;
};

/// max over probe data g of ||d linear_solve(g)||_{L^{q_eff m}} / ||g||_{L^m}.
C0Measurement measure_C0(const ProblemParams& p, unsigned seed = 12345);

struct DriftSolve {
    GridFunction w;
    double kernel_gap = 0;
    bool near_singular = false;
};

/// Solves (-Delta)^s w - B dw/dx = f; kernel_gap is the smallest singular value.
DriftSolve drift_solve(const GridFunction& B, const GridFunction& f, const ProblemParams& p);

/// Dispatch on the regime: monotone with a bump supersolution below 2s,
/// Schauder at and above 2s.
SolveReport solve_auto(const ProblemParams& p, const SourceSpec& f, const SolverOptions& opt = {});

}  // namespace frackpz
