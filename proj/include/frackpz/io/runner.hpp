#pragma once

#include <string>
#include <vector>

#include "frackpz/io/config.hpp"
#include "frackpz/io/output.hpp"

namespace frackpz {

/// Exit codes of the command-line front end.
enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNonconvergent = 2, kExitVerifyFailed = 3 };

/// Named output files of one command.
struct Artifacts {
    Json report;
    std::vector<std::pair<std::string, CsvTable>> tables;

    void write(const std::string& dir, const std::string& report_name = "report.json") const;
};

struct SolveOutcome {
    SolveReport report;
    Artifacts artifacts;
    int exit_code = kExitOk;
};

/// Runs the configured solver ("auto" dispatches on the regime).
SolveReport run_solver(const RunConfig& cfg);
SolveOutcome cmd_solve(const RunConfig& cfg);

extern const std::vector<std::string> kVerifyTargets;

struct VerifyOutcome {
    bool pass = false;
    Artifacts artifacts;
    std::string summary;
    int exit_code = kExitOk;
};

/// Throws ConfigError for unknown targets or unsupported domains.
VerifyOutcome cmd_verify(const RunConfig& cfg, const std::string& target);

struct SweepPoint {
    double lambda = 0;
    bool converged = false;
    int iterations = 0;
    double final_residual = 0;
    double sup_norm = 0;
    std::string status;
};

struct SweepOutcome {
    std::vector<SweepPoint> points;  // grid points followed by bisection points, sorted by lambda
    double lambda_star_empirical = 0;
    double lambda_star_analytic = -1;  // negative when the regime has no closed form
    Artifacts artifacts;
    int exit_code = kExitOk;
};

/// Grid over [lambda_min, lambda_max] on `jobs` workers, then bisection between
/// the last converged and the first failed grid point.
SweepOutcome cmd_sweep(const RunConfig& cfg, int jobs);

/// Build and exponent information.
Json cmd_info(const RunConfig* cfg);

}  // namespace frackpz
