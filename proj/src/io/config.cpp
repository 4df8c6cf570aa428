#include "frackpz/io/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace frackpz {

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
    return v;
}

double to_double(const std::string& key, const std::string& v, int line) {
    std::string t = trim(v);
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return kInf;
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE || std::isnan(x))
        throw ConfigError(line, "key '" + key + "': expected a number, got '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v, int line) {
    double x = to_double(key, v, line);
    if (!(std::abs(x) < 2e9) || x != std::floor(x))
        throw ConfigError(line, "key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& v, int line) {
    std::string t = trim(v);
    if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
    std::vector<double> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item, line));
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&t](const std::string& k, auto field) {
            t[k] = [k, field](RunConfig& c, const std::string& v, int line) { field(c) = to_double(k, v, line); };
        };
        auto integer = [&t](const std::string& k, auto field) {
            t[k] = [k, field](RunConfig& c, const std::string& v, int line) { field(c) = to_int(k, v, line); };
        };
        // range checks at the line that sets the value; cross-key checks run in validate()
        auto ranged = [&t](const std::string& k, auto field, bool (*ok)(double), const char* rule) {
            t[k] = [k, field, ok, rule](RunConfig& c, const std::string& v, int line) {
                double x = to_double(k, v, line);
                if (!ok(x)) throw ConfigError(line, "key '" + k + "': " + rule + ", got '" + v + "'");
                field(c) = x;
            };
        };
        t["params.N"] = [](RunConfig& c, const std::string& v, int line) {
            int n = to_int("params.N", v, line);
            if (n < 1 || n > 3) throw ConfigError(line, "key 'params.N': dimension must be 1, 2 or 3, got '" + v + "'");
            c.params.N = n;
        };
        ranged("params.s", [](RunConfig& c) -> double& { return c.params.s; },
               [](double x) { return x > 0.5 && x < 1; }, "s must lie in (1/2, 1)");
        ranged("params.q", [](RunConfig& c) -> double& { return c.params.q; }, [](double x) { return x > 1; },
               "q must be > 1");
        ranged("params.lambda", [](RunConfig& c) -> double& { return c.params.lambda; },
               [](double x) { return x >= 0; }, "lambda must be >= 0");
        ranged("params.m", [](RunConfig& c) -> double& { return c.params.m; }, [](double x) { return x >= 1; },
               "m must be >= 1");
        t["domain.kind"] = [](RunConfig& c, const std::string& v, int line) {
            if (v == "interval") c.params.domain.kind = DomainKind::Interval;
            else if (v == "ball") c.params.domain.kind = DomainKind::Ball;
            else throw ConfigError(line, "domain.kind must be interval or ball, got '" + v + "'");
        };
        num("domain.a", [](RunConfig& c) -> double& { return c.params.domain.a; });
        num("domain.b", [](RunConfig& c) -> double& { return c.params.domain.b; });
        ranged("domain.R", [](RunConfig& c) -> double& { return c.params.domain.R; }, [](double x) { return x > 0; },
               "radius must be positive");
        t["domain.grid_n"] = [](RunConfig& c, const std::string& v, int line) {
            int n = to_int("domain.grid_n", v, line);
            if (n < 16) throw ConfigError(line, "key 'domain.grid_n': grid_n must be at least 16, got '" + v + "'");
            c.params.domain.grid_n = n;
        };
        t["source.kind"] = [](RunConfig& c, const std::string& v, int line) {
            if (v == "constant") c.source.kind = SourceSpec::Kind::Constant;
            else if (v == "power") c.source.kind = SourceSpec::Kind::Power;
            else if (v == "indicator") c.source.kind = SourceSpec::Kind::Indicator;
            else if (v == "tabulated") c.source.kind = SourceSpec::Kind::Tabulated;
            else throw ConfigError(line, "source.kind must be constant, power, indicator or tabulated, got '" + v + "'");
        };
        num("source.value", [](RunConfig& c) -> double& { return c.source.value; });
        num("source.theta", [](RunConfig& c) -> double& { return c.source.theta; });
        num("source.lo", [](RunConfig& c) -> double& { return c.source.lo; });
        num("source.hi", [](RunConfig& c) -> double& { return c.source.hi; });
        t["source.radius"] = [](RunConfig& c, const std::string& v, int line) {
            double r = to_double("source.radius", v, line);
            c.source.lo = -r;
            c.source.hi = r;
        };
        t["source.xs"] = [](RunConfig& c, const std::string& v, int line) { c.source.xs = to_list("source.xs", v, line); };
        t["source.ys"] = [](RunConfig& c, const std::string& v, int line) { c.source.ys = to_list("source.ys", v, line); };
        t["solver.name"] = [](RunConfig& c, const std::string& v, int line) {
            if (v != "auto" && v != "monotone" && v != "picard" && v != "schauder")
                throw ConfigError(line, "solver must be auto, monotone, picard or schauder, got '" + v + "'");
            c.solver = v;
        };
        t["solver"] = t["solver.name"];
        num("solver.tol_inner", [](RunConfig& c) -> double& { return c.options.tol_inner; });
        num("solver.tol_outer", [](RunConfig& c) -> double& { return c.options.tol_outer; });
        num("solver.omega", [](RunConfig& c) -> double& { return c.options.omega; });
        num("solver.tol_mono_rel", [](RunConfig& c) -> double& { return c.options.tol_mono_rel; });
        integer("solver.max_inner", [](RunConfig& c) -> int& { return c.options.max_inner; });
        integer("solver.max_outer", [](RunConfig& c) -> int& { return c.options.max_outer; });
        integer("solver.max_iter", [](RunConfig& c) -> int& { return c.options.max_iter; });
        integer("solver.snapshot_every", [](RunConfig& c) -> int& { return c.options.snapshot_every; });
        num("solver.C1", [](RunConfig& c) -> double& { return c.C1; });
        num("sweep.lambda_min", [](RunConfig& c) -> double& { return c.sweep.lambda_min; });
        num("sweep.lambda_max", [](RunConfig& c) -> double& { return c.sweep.lambda_max; });
        integer("sweep.count", [](RunConfig& c) -> int& { return c.sweep.count; });
        integer("sweep.bisect", [](RunConfig& c) -> int& { return c.sweep.bisect; });
        num("verify.alpha", [](RunConfig& c) -> double& { return c.verify.alpha; });
        num("verify.sigma", [](RunConfig& c) -> double& { return c.verify.sigma; });
        num("verify.r1", [](RunConfig& c) -> double& { return c.verify.r1; });
        num("verify.amplitude", [](RunConfig& c) -> double& { return c.verify.amplitude; });
        integer("verify.samples", [](RunConfig& c) -> int& { return c.verify.samples; });
        t["verify.family"] = [](RunConfig& c, const std::string& v, int line) {
            if (v != "bump" && v != "power") throw ConfigError(line, "verify.family must be bump or power");
            c.verify.family = v;
        };
        t["output.dir"] = [](RunConfig& c, const std::string& v, int) { c.output_dir = v; };
        t["seed"] = [](RunConfig& c, const std::string& v, int line) {
            double x = to_double("seed", v, line);
            if (!(x >= 0 && x <= 4294967295.0) || x != std::floor(x))
                throw ConfigError(line, "seed must be an unsigned 32-bit integer");
            c.seed = static_cast<unsigned>(x);
        };
        return t;
    }();
    return table;
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object() && !(prefix == "source.xs" || prefix == "source.ys")) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else if (j.is_array()) {
        std::string v;
        for (const auto& x : j) {
            if (!x.is_number()) throw ConfigError(0, "key '" + prefix + "': list entries must be numbers");
            v += (v.empty() ? "" : ",") + x.dump();
        }
        out.emplace_back(prefix, v);
    } else if (j.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j.get<double>();
        if (j.is_number_integer()) os.str(std::to_string(j.get<long long>()));
        out.emplace_back(prefix, os.str());
    } else if (j.is_null() && prefix == "params.m") {
        out.emplace_back(prefix, "inf");
    } else {
        throw ConfigError(0, "key '" + prefix + "': unsupported value " + j.dump());
    }
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
    it->second(cfg, unquote(trim(value)), line);
}

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    if (source.kind == SourceSpec::Kind::Tabulated &&
        (source.xs.size() < 2 || source.xs.size() != source.ys.size() ||
         !std::is_sorted(source.xs.begin(), source.xs.end())))
        throw ConfigError(0, "tabulated source needs sorted source.xs and source.ys of equal length >= 2");
    if (source.kind == SourceSpec::Kind::Power && source.theta >= params.N)
        throw ConfigError(0, "power source needs theta < N to be locally integrable");
    if (sweep.count < 0 || (sweep.enabled() && !(sweep.lambda_max >= sweep.lambda_min && sweep.lambda_min >= 0)))
        throw ConfigError(0, "sweep needs 0 <= lambda_min <= lambda_max and count >= 0");
    if (options.max_inner < 1 || options.max_outer < 1 || options.max_iter < 1 || !(options.omega > 0 && options.omega <= 1))
        throw ConfigError(0, "solver limits must be positive and omega in (0, 1]");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n'));
            throw ConfigError(line, std::string("malformed JSON: ") + e.what());
        }
        std::vector<std::pair<std::string, std::string>> kv;
        flatten(j, "", kv);
        for (const auto& [k, v] : kv) apply_setting(cfg, k, v);
    } else {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            auto hash = raw.find('#');
            std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (l.empty()) continue;
            auto eq = l.find('=');
            if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value', got '" + l + "'");
            std::string key = trim(l.substr(0, eq));
            if (key.empty()) throw ConfigError(line, "missing key before '='");
            apply_setting(cfg, key, l.substr(eq + 1), line);
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    const auto& p = c.params;
    j["params"] = {{"N", p.N}, {"s", p.s}, {"q", p.q}, {"lambda", p.lambda}};
    j["params"]["m"] = std::isfinite(p.m) ? nlohmann::ordered_json(p.m) : nlohmann::ordered_json("inf");
    j["domain"] = {{"kind", p.domain.kind == DomainKind::Ball ? "ball" : "interval"},
                   {"a", p.domain.a},
                   {"b", p.domain.b},
                   {"R", p.domain.R},
                   {"grid_n", p.domain.grid_n}};
    j["source"] = {{"description", c.source.describe()}};
    j["solver"] = {{"name", c.solver},
                   {"tol_inner", c.options.tol_inner},
                   {"tol_outer", c.options.tol_outer},
                   {"omega", c.options.omega},
                   {"max_inner", c.options.max_inner},
                   {"max_outer", c.options.max_outer},
                   {"max_iter", c.options.max_iter}};
    if (c.sweep.enabled())
        j["sweep"] = {{"lambda_min", c.sweep.lambda_min},
                      {"lambda_max", c.sweep.lambda_max},
                      {"count", c.sweep.count},
                      {"bisect", c.sweep.bisect}};
    j["seed"] = c.seed;
    return j;
}

}  // namespace frackpz
