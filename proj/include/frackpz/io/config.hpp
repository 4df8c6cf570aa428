#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "frackpz/core/params.hpp"
#include "frackpz/core/source.hpp"
#include "frackpz/diagnostics/diagnostics.hpp"
#include "frackpz/solvers/solvers.hpp"

namespace frackpz {

/// Configuration problem anchored at a line of the input (0 when not applicable).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

struct SweepConfig {
    double lambda_min = 0;
    double lambda_max = 0;
    int count = 0;
    int bisect = 8;  // refinement steps between the last converged and first failed point
    bool enabled() const { return count > 0; }
};

struct VerifyConfig {
    double alpha = 0;   // singular weight exponent; 0 picks the midpoint of (1, 2s)
    double sigma = 10;  // bootstrap integrability index
    double r1 = 0;      // bootstrap start; 0 picks the midpoint of (1, p_*)
    int samples = 10000;
    std::string family = "bump";  // supersolution family: bump | power
    double amplitude = 0;         // power amplitude A; 0 picks A_max / 2
};

struct RunConfig {
    ProblemParams params;
    SourceSpec source;
    std::string solver = "auto";  // auto | monotone | picard | schauder
    SolverOptions options;
    double C1 = -1;  // (m00) constant for picard; negative measures it
    SweepConfig sweep;
    VerifyConfig verify;
    std::string output_dir = "out";
    unsigned seed = kDefaultSeed;

    void validate() const;
};

/// Flat "key = value" lines with dotted keys and # comments, or a JSON object
/// whose nested keys flatten to the same dotted names.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies one dotted key; throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);

nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace frackpz
