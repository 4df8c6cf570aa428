#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "frackpz/core/params.hpp"
#include "frackpz/diagnostics/diagnostics.hpp"
#include "frackpz/solvers/solvers.hpp"
#include "frackpz/supersolutions/supersolutions.hpp"

namespace frackpz {

using Json = nlohmann::ordered_json;

/// Shortest form that round-trips at 17 significant digits, '.' decimal point.
std::string format_double(double v);

/// Header plus rows, ',' separated, every value through format_double.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add(const std::vector<double>& row);
    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

Json to_json(const SolveReport& r);
Json to_json(const ExponentTable& t);
Json to_json(const GreenRefinement& r);
Json to_json(const M00Report& r);
Json to_json(const HardyReport& r);
Json to_json(const ComparisonReport& r);
Json to_json(const BootstrapReport& r);
Json to_json(const SingularWeightReport& r);
Json to_json(const SupersolutionCheck& r);

/// x, u, |du|, residual of the untruncated equation.
CsvTable solution_table(const SolveReport& r, const ProblemParams& p, const SourceSpec& f);
/// x followed by one column per stored iterate.
CsvTable iterate_table(const SolveReport& r);
/// Scatter data of a Green bound check.
CsvTable bound_table(const BoundCheckReport& r);

void write_text(const std::string& path, const std::string& text);
/// Pretty-printed with a trailing newline.
void write_json(const std::string& path, const Json& j);

}  // namespace frackpz
