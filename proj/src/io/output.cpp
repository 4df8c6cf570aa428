#include "frackpz/io/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "frackpz/core/norms.hpp"

namespace frackpz {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw std::invalid_argument("CSV row width does not match the header");
    rows_.push_back(row);
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t k = 0; k < header_.size(); ++k) out += (k ? "," : "") + header_[k];
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_double(row[k]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::string& path) const {
    write_text(path, str());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

namespace {

Json number(double v) {
    // JSON has no infinities
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

}  // namespace

void write_json(const std::string& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

Json to_json(const ExponentTable& t) {
    return Json{{"p_star", number(t.p_star)},
                {"critical_q", number(t.critical_q)},
                {"regularity_cap", number(t.regularity_cap)},
                {"alpha0", number(t.alpha0)},
                {"regime", to_string(t.regime)}};
}

Json to_json(const SolveReport& r) {
    Json j;
    j["solver"] = r.solver;
    j["status"] = to_string(r.status);
    j["converged"] = r.converged;
    j["monotone_flag"] = r.monotone_flag;
    j["regime"] = to_string(r.regime);
    j["iterations"] = r.iterations;
    j["residual_l1"] = numbers(r.residual_l1);
    j["residual_linf"] = numbers(r.residual_linf);
    j["gain_history"] = numbers(r.gain_history);
    j["norms_history"] = numbers(r.norms_history);
    j["differences"] = numbers(r.differences);
    Json m = Json::object();
    for (const auto& [k, v] : r.metrics) m[k] = number(v);
    j["metrics"] = m;
    j["notes"] = r.notes;
    j["snapshots"] = r.iterates.size();
    return j;
}

Json to_json(const GreenRefinement& r) {
    Json levels = Json::array();
    for (const auto& l : r.levels)
        levels.push_back({{"grid_n", l.grid_n},
                          {"samples", l.samples},
                          {"excluded", l.excluded},
                          {"violations", l.violations},
                          {"fitted_constant", number(l.fitted_constant)},
                          {"grad_samples", l.grad_samples},
                          {"grad_violations", l.grad_violations},
                          {"grad_fitted_constant", number(l.grad_fitted_constant)},
                          {"branch_counts", l.branch_counts},
                          {"symmetry_error", number(l.symmetry_error)},
                          {"seed", l.seed},
                          {"pass", l.pass}});
    return Json{{"levels", levels}, {"drift", number(r.drift)}, {"grad_drift", number(r.grad_drift)}, {"pass", r.pass}};
}

Json to_json(const M00Report& r) {
    return Json{{"grid_n", r.grid_ns}, {"C1", numbers(r.C1)}, {"drift", number(r.drift)}, {"pass", r.pass}, {"note", r.note}};
}

Json to_json(const HardyReport& r) {
    return Json{{"constant", number(r.constant)}, {"grid_n", r.grid_n}, {"weighted_nodes", r.weighted_nodes}};
}

Json to_json(const ComparisonReport& r) {
    return Json{{"verdict", to_string(r.verdict)},
                {"sub_ok", r.sub_ok},
                {"super_ok", r.super_ok},
                {"lipschitz_ok", r.lipschitz_ok},
                {"sub_residual", number(r.sub_residual)},
                {"super_residual", number(r.super_residual)},
                {"min_gap", number(r.min_gap)},
                {"failed", r.failed}};
}

Json to_json(const BootstrapReport& r) {
    return Json{{"r", numbers(r.r)},
                {"threshold", number(r.threshold)},
                {"exited", r.exited},
                {"increasing", r.increasing},
                {"steps", r.steps}};
}

Json to_json(const SingularWeightReport& r) {
    return Json{{"alpha", number(r.alpha)},
                {"n", numbers(r.n_values)},
                {"sup_norms", numbers(r.sup_norms)},
                {"monotone", r.monotone},
                {"last_decade_growth", number(r.last_decade_growth)},
                {"saturated", r.saturated},
                {"beta_threshold", number(r.beta_threshold)},
                {"beta_high", number(r.beta_high)},
                {"beta_low", number(r.beta_low)},
                {"grid_n", r.grid_ns},
                {"seminorm_high", numbers(r.seminorm_high)},
                {"seminorm_low", numbers(r.seminorm_low)},
                {"growth_high", number(r.growth_high)},
                {"growth_low", number(r.growth_low)},
                {"high_stable", r.high_stable},
                {"low_growing", r.low_growing},
                {"pass", r.pass}};
}

Json to_json(const SupersolutionCheck& r) {
    const Grid* g = r.residual.grid() ? r.residual.grid().get() : nullptr;
    return Json{{"pass", r.pass},
                {"worst_node", r.worst_node},
                {"worst_x", g && r.worst_node >= 0 ? number(g->node(r.worst_node)) : Json(nullptr)},
                {"worst_value", number(r.worst_value)},
                {"tol", number(r.tol)},
                {"excluded", r.excluded}};
}

CsvTable solution_table(const SolveReport& r, const ProblemParams& p, const SourceSpec& f) {
    CsvTable t({"x", "u", "grad", "residual"});
    if (!r.u.grid()) return t;
    const GridPtr& g = r.u.grid();
    GridFunction d = finite_gradient(r.u);
    ProblemParams pp = p;
    GridFunction res = equation_residual(r.u, pp, f.evaluate(g));
    for (int i = 0; i < g->size(); ++i) t.add({g->node(i), r.u[i], d[i], g->is_boundary(i) ? 0.0 : res[i]});
    return t;
}

CsvTable iterate_table(const SolveReport& r) {
    std::vector<std::string> header{"x"};
    for (std::size_t k = 0; k < r.iterates.size(); ++k) header.push_back("u" + std::to_string(k));
    CsvTable t(header);
    if (r.iterates.empty()) return t;
    const GridPtr& g = r.iterates.front().grid();
    for (int i = 0; i < g->size(); ++i) {
        std::vector<double> row{g->node(i)};
        for (const auto& u : r.iterates) row.push_back(u[i]);
        t.add(row);
    }
    return t;
}

CsvTable bound_table(const BoundCheckReport& r) {
    CsvTable t({"dist", "dx", "dy", "ratio", "grad_ratio", "branch"});
    for (const auto& s : r.scatter) t.add({s.dist, s.dx, s.dy, s.ratio, s.grad_ratio, static_cast<double>(s.branch)});
    return t;
}

}  // namespace frackpz
