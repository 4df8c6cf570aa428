#pragma once

#include <string>
#include <utility>
#include <vector>

#include "frackpz/core/grid.hpp"
#include "frackpz/core/params.hpp"
#include "frackpz/core/source.hpp"
#include "frackpz/operators/fraclap.hpp"

namespace frackpz {

/// alpha = (2s-q)/(q-1), the only exponent for which A|x|^{-alpha} balances
/// (-Delta)^s against |grad|^q.
double power_alpha(double s, double q);

/// C_{N,s}(alpha) with (-Delta)^s |x|^{-alpha} = C |x|^{-alpha-2s}, from the
/// Gamma quotient 4^s G((alpha+2s)/2) G((N-alpha)/2) / (G(alpha/2) G((N-alpha-2s)/2)).
double power_eigenvalue(int N, double s, double alpha);

struct PowerEigenCheck {
    double closed_form = 0;
    double numeric = 0;    // mean of fraclap(|x|^{-alpha}) |x|^{alpha+2s} over mid radii
    double spread = 0;     // (max - min) / closed_form over the same nodes
    double rel_error = 0;  // worst |ratio - closed_form| / closed_form
};

/// Quadrature value of C_{N,s}(alpha): |x|^{-alpha} on the unit ball grid in
/// Open mode, plus the exact contribution of the exterior, on r in [0.3, 0.6].
PowerEigenCheck power_eigenvalue_check(int N, double s, double alpha, int grid_n = 256);

/// A_max = (C_{N,s}(alpha) / alpha^q)^{1/(q-1)}.
double power_amplitude_max(int N, double s, double q);

struct PowerSupersolSpec {
    double alpha = 0;
    double A = 0;
    double C = 0;  // C_{N,s}(alpha)
    bool admissible = false;

    static PowerSupersolSpec make(int N, double s, double q, double A);
};

/// sigma0 = ((N+alpha-2s)/(N-2s))^{1/alpha},
/// r0 = ((N+alpha-2s)/(N+alpha-2s+sigma0^{2s-N}))^{1/alpha}.
std::pair<double, double> bump_thresholds(int N, double s, double alpha);

struct RadialBumpSpec {
    double alpha = 0;
    double C = 1;
    double sigma0 = 0;
    double r0 = 0;
    double F_floor = 0;  // min of F over (0, r0]

    static RadialBumpSpec make(int N, double s, double alpha, double C = 1.0, int profile_points = 64);
};

struct BumpProfile {
    std::vector<double> r;
    std::vector<double> F;
    double F_min = 0;
    bool decreasing = false;
};

/// F(r) = r^{2s-alpha} (-Delta)^s (1-|x|^alpha)_+ at count uniform radii in (0, r0].
BumpProfile bump_F_profile(int N, double s, double alpha, int count);

/// A candidate supersolution on the nodes of the problem grid, with
/// (-Delta)^s w and dw/dr at those nodes (w may be non-zero outside the domain).
struct Supersolution {
    std::string family;
    GridFunction w;
    GridFunction lap;
    GridFunction grad;
    std::vector<char> excluded;  // nodes left out of the verdict
};

/// Candidate vanishing outside the domain (e.g. scaled green_solve output).
Supersolution make_candidate(const GridFunction& w, double s, BoundaryMode mode = BoundaryMode::Distance);

/// C (1 - |x/rho|^alpha)_+ with rho = R / r0, evaluated on an enlarged grid of the same step.
Supersolution bump_supersolution(const ProblemParams& p, const RadialBumpSpec& b);

/// A |x|^{-alpha} restricted to the ball; nodes within 2h of the origin are excluded.
Supersolution power_supersolution(const ProblemParams& p, const PowerSupersolSpec& ps);

struct SupersolutionCheck {
    GridFunction residual;
    bool pass = false;
    int worst_node = -1;
    double worst_value = 0;
    double tol = 0;
    int excluded = 0;
};

/// residual = (-Delta)^s w - |dw|^q - lambda f; passes when residual >= -tol at
/// every included interior node, tol = tol_rel * max |(-Delta)^s w|.
SupersolutionCheck verify_supersolution(const Supersolution& w, const ProblemParams& p, const SourceSpec& f,
                                        double tol_rel = 1e-6);
SupersolutionCheck verify_supersolution(const GridFunction& w, const ProblemParams& p, const SourceSpec& f,
                                        double tol_rel = 1e-6);

/// Largest lambda in [0, lambda_hi] for which the verdict holds, by bisection.
double lambda_admissible(const Supersolution& w, const ProblemParams& p, const SourceSpec& f,
                         double lambda_hi = 1e6, double tol_rel = 1e-6);

struct BumpChoice {
    RadialBumpSpec spec;
    Supersolution w;
    double lambda_admissible = 0;
};

/// Bump with alpha (default midpoint of (1, 2s)) and amplitude C maximizing lambda_admissible.
BumpChoice choose_bump(const ProblemParams& p, const SourceSpec& f, double alpha = 0);

}  // namespace frackpz
