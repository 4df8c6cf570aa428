#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "frackpz/core/parallel.hpp"
#include "frackpz/io/runner.hpp"

using namespace frackpz;

namespace {

struct Globals {
    std::string config;
    std::string out;
    int jobs = 0;
    std::optional<unsigned> seed;
    std::optional<int> grid;
};

RunConfig load(const Globals& gl) {
    RunConfig cfg = gl.config.empty() ? RunConfig{} : load_config(gl.config);
    if (gl.grid) apply_setting(cfg, "domain.grid_n", std::to_string(*gl.grid));
    if (gl.seed) cfg.seed = *gl.seed;
    if (const char* env = std::getenv("FRACKPZ_OUT"); env && *env) cfg.output_dir = env;
    if (!gl.out.empty()) cfg.output_dir = gl.out;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver and verification workbench for (-Delta)^s u = |grad u|^q + lambda f"};
    app.require_subcommand(1);
    Globals gl;
    app.add_option("--config", gl.config, "Config file (key = value lines or JSON)");
    app.add_option("--out", gl.out, "Output directory (overrides FRACKPZ_OUT and output.dir)");
    app.add_option("--jobs", gl.jobs, "Sweep workers (default: number of cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", gl.seed, "Random seed");
    app.add_option("--grid", gl.grid, "Override domain.grid_n");

    auto* solve = app.add_subcommand("solve", "Solve the configured problem");
    auto* verify = app.add_subcommand("verify", "Run one diagnostic");
    std::string target;
    verify->add_option("target", target, "greenbounds | m00 | hardy | supersolution | comparison | singularweight | bootstrap")
        ->required();
    auto* sweep = app.add_subcommand("sweep", "Sweep lambda and estimate the existence threshold");
    auto* info = app.add_subcommand("info", "Print build and exponent information");
    for (auto* sub : {solve, verify, sweep, info}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*info) {
            if (gl.config.empty()) {
                std::cout << cmd_info(nullptr).dump(2) << "\n";
            } else {
                RunConfig cfg = load(gl);
                std::cout << cmd_info(&cfg).dump(2) << "\n";
            }
            return kExitOk;
        }
        RunConfig cfg = load(gl);
        if (*solve) {
            SolveOutcome o = cmd_solve(cfg);
            o.artifacts.write(cfg.output_dir);
            std::cout << to_string(o.report.status) << " after " << o.report.iterations << " iterations ("
                      << o.report.solver << ", " << to_string(o.report.regime) << ")\n";
            for (const auto& n : o.report.notes) std::cout << "  " << n << "\n";
            return o.exit_code;
        }
        if (*verify) {
            VerifyOutcome o = cmd_verify(cfg, target);
            o.artifacts.write(cfg.output_dir, "verify_" + target + ".json");
            std::cout << target << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.summary << "\n";
            return o.exit_code;
        }
        SweepOutcome o = cmd_sweep(cfg, gl.jobs > 0 ? gl.jobs : default_threads());
        o.artifacts.write(cfg.output_dir, "sweep.json");
        std::cout << "empirical lambda* " << format_double(o.lambda_star_empirical);
        if (o.lambda_star_analytic >= 0) std::cout << ", analytic lambda* " << format_double(o.lambda_star_analytic);
        std::cout << "\n";
        return o.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
