// Command-line front end: run scenarios, list built-ins, sweep families.
//
// Exit codes: 0 all expectations met, 2 expectation failures, 3 input errors,
// 4 internal or solver errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "starmod/starmod.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_expectation = 2;
constexpr int exit_input = 3;
constexpr int exit_internal = 4;

starmod::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) starmod::raise(starmod::ErrorKind::ParseError, "cannot open '" + path + "'");
    try {
        return starmod::json::parse(in);
    } catch (const starmod::json::parse_error& e) {
        starmod::raise(starmod::ErrorKind::ParseError, path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) starmod::raise(starmod::ErrorKind::CheckError, "cannot write '" + path + "'");
    out << text;
}

// STARMOD_CONFIG may point at a JSON file with default run options; explicit
// flags still win.
starmod::RunOverrides config_overrides() {
    starmod::RunOverrides ov;
    const char* path = std::getenv("STARMOD_CONFIG");
    if (path == nullptr || *path == '\0') return ov;
    const starmod::json cfg = read_json_file(path);
    if (cfg.contains("tolerance")) ov.tolerance = cfg.at("tolerance").get<double>();
    if (cfg.contains("max_iter")) ov.max_iter = cfg.at("max_iter").get<std::size_t>();
    if (cfg.contains("restarts")) ov.restarts = cfg.at("restarts").get<std::size_t>();
    if (cfg.contains("seed")) ov.seed = cfg.at("seed").get<std::uint64_t>();
    return ov;
}

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n = 0;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        starmod::raise(starmod::ErrorKind::ValidationError,
                       "grid must look like a:b:n, got '" + text + "'");
    try {
        g.lo = std::stod(text.substr(0, c1));
        g.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const long long n = std::stoll(text.substr(c2 + 1));
        if (n < 1) throw std::invalid_argument("n");
        g.n = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        starmod::raise(starmod::ErrorKind::ValidationError,
                       "grid must look like a:b:n, got '" + text + "'");
    }
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"module independence certification toolkit"};
    app.set_version_flag("--version", starmod::tool_version);
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run one scenario and check its expectations");
    std::string scenario_name, scenario_file, json_out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter, restarts;
    bool quiet = false;
    auto* name_opt = run_cmd->add_option("--scenario", scenario_name, "built-in scenario name");
    auto* file_opt = run_cmd->add_option("--file", scenario_file, "scenario JSON file");
    name_opt->excludes(file_opt);
    run_cmd->add_option("--seed", seed, "random seed");
    run_cmd->add_option("--tol", tol, "solver tolerance");
    run_cmd->add_option("--max-iter", max_iter, "solver iteration budget");
    run_cmd->add_option("--restarts", restarts, "descent restart budget");
    run_cmd->add_option("--json-out", json_out, "write the report as JSON to this path");
    run_cmd->add_flag("--quiet", quiet, "suppress the text summary");

    auto* list_cmd = app.add_subcommand("list", "list built-in scenarios and sweep families");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a one-parameter family over a grid");
    std::string family, grid_text, plot_path, sweep_json_out;
    sweep_cmd->add_option("--family", family, "sweep family name")->required();
    sweep_cmd->add_option("--grid", grid_text, "grid a:b:n (n points from a to b)")->required();
    sweep_cmd->add_option("--plot", plot_path, "write an SVG gap plot to this path");
    sweep_cmd->add_option("--json-out", sweep_json_out, "write the sweep report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (list_cmd->parsed()) {
            std::cout << "scenarios:\n";
            for (const auto& [name, summary] : starmod::builtin_list())
                std::cout << "  " << name << "  " << summary << "\n";
            std::cout << "sweep families:\n";
            for (const auto& [name, summary] : starmod::sweep_families())
                std::cout << "  " << name << "  " << summary << "\n";
            return exit_ok;
        }

        starmod::RunOverrides ov = config_overrides();
        if (seed) ov.seed = seed;
        if (tol) ov.tolerance = tol;
        if (max_iter) ov.max_iter = max_iter;
        if (restarts) ov.restarts = restarts;

        if (run_cmd->parsed()) {
            if (name_opt->count() == 0 && file_opt->count() == 0)
                starmod::raise(starmod::ErrorKind::ValidationError,
                               "run needs --scenario or --file");
            starmod::json doc;
            if (name_opt->count() > 0)
                doc = starmod::builtin_scenario(
                    scenario_name, ov.seed.value_or(starmod::defaults::solve_seed));
            else
                doc = read_json_file(scenario_file);
            const starmod::RunReport report = starmod::run_scenario(doc, ov);
            if (!quiet) std::cout << report.text_summary();
            if (!json_out.empty()) write_text_file(json_out, report.to_json().dump(2) + "\n");
            if (report.errored > 0) return exit_internal;
            return report.failed > 0 ? exit_expectation : exit_ok;
        }

        if (sweep_cmd->parsed()) {
            const GridSpec grid = parse_grid(grid_text);
            starmod::RunOptions opt;
            if (ov.tolerance) opt.tolerance = *ov.tolerance;
            if (ov.max_iter) opt.max_iter = *ov.max_iter;
            if (ov.restarts) opt.restarts = *ov.restarts;
            if (ov.seed) opt.seed = *ov.seed;
            const starmod::SweepReport report =
                starmod::run_sweep(family, grid.lo, grid.hi, grid.n, opt);
            std::cout << report.text_table();
            if (!sweep_json_out.empty())
                write_text_file(sweep_json_out, report.to_json().dump(2) + "\n");
            if (!plot_path.empty()) write_text_file(plot_path, starmod::sweep_svg(report));
            return report.any_error ? exit_internal : exit_ok;
        }
    } catch (const starmod::Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.kind()) {
            case starmod::ErrorKind::ParseError:
            case starmod::ErrorKind::ValidationError:
            case starmod::ErrorKind::UnknownScenario:
            case starmod::ErrorKind::BadProblem:
                return exit_input;
            default:
                return exit_internal;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_input;
}
