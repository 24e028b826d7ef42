// kloptim: experiment runner for the cubic-regularization / proximal-GDA
// convergence-rate laboratory.
//
// Subcommands:
//   run    solve one zoo problem, write trace CSV + summary JSON, print the
//          observed-vs-predicted verdict table
//   suite  run the full acceptance matrix (one row per criterion)
//   fit    classify an error column of an existing trace CSV
//   list   enumerate the problem zoo
//
// Exit codes: 0 ok, 1 unexpected failure, 2 unknown problem, 3 invalid
// parameters, 4 I/O failure, 5 monitor hard-failure under --strict.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kloptim/cubic.hpp"
#include "kloptim/errors.hpp"
#include "kloptim/experiment.hpp"
#include "kloptim/suite.hpp"
#include "kloptim/trace_io.hpp"
#include "kloptim/zoo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUnknownProblem = 2;
constexpr int kExitBadParams = 3;
constexpr int kExitIo = 4;
constexpr int kExitMonitorFailure = 5;

// flat key=value config file with [cr] / [gda] sections; flags override the
// file, the file overrides defaults
struct FileConfig {
    std::map<std::string, std::string> global, cr, gda;
};

FileConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    FileConfig fc;
    auto* section = &fc.global;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        std::size_t b = 0;
        while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        line.erase(0, b);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line == "[cr]")
                section = &fc.cr;
            else if (line == "[gda]")
                section = &fc.gda;
            else if (line == "[global]")
                section = &fc.global;
            else
                throw kloptim::InputError("config: unknown section " + line);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw kloptim::InputError("config: expected key=value, got '" + line + "'");
        (*section)[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return fc;
}

void print_verdicts(const nlohmann::json& summary) {
    std::printf("%-16s %-32s %-24s %s\n", "sequence", "observed", "predicted", "match");
    for (const auto& v : summary["verdicts"]) {
        auto render = [](const nlohmann::json& j) -> std::string {
            if (j.is_string()) return j.get<std::string>();
            std::string s = j["class"].get<std::string>();
            if (j.contains("linear_ratio"))
                s += " ratio=" + std::to_string(j["linear_ratio"].get<double>());
            if (j.contains("sublinear_exponent"))
                s += " p=" + std::to_string(j["sublinear_exponent"].get<double>());
            if (j.contains("superlinear_order"))
                s += " q=" + std::to_string(j["superlinear_order"].get<double>());
            return s;
        };
        const auto& m = v["match"];
        std::printf("%-16s %-32s %-24s %s\n", v["sequence"].get<std::string>().c_str(),
                    render(v["observed"]).c_str(), render(v["predicted"]).c_str(),
                    m.is_null() ? "-" : (m.get<bool>() ? "yes" : "NO"));
    }
}

void print_report(const kloptim::RateReport& rep) {
    std::printf("class: %s\n", kloptim::to_string(rep.cls).c_str());
    if (rep.linear_ratio) std::printf("linear_ratio: %.6g\n", *rep.linear_ratio);
    if (rep.sublinear_exponent)
        std::printf("sublinear_exponent: %.6g\n", *rep.sublinear_exponent);
    if (rep.superlinear_order)
        std::printf("superlinear_order: %.6g\n", *rep.superlinear_order);
    std::printf("burn_in: %zu\nfit_residual: %.6g\n", rep.burn_in, rep.fit_residual);
    if (rep.degenerate) std::printf("degenerate: true\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KL convergence-rate laboratory for cubic regularization and proximal-GDA"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "run one experiment and write trace + summary");
    std::string problem, algo = "cr", out_dir, config_path;
    double opt_M = 0.0, opt_eta_x = 0.0, opt_eta_y = 0.0, opt_grad_tol = 0.0,
           opt_step_tol = 0.0;
    std::uint64_t seed = 1;
    std::size_t max_iters = 10000;
    long long burn_in = -1;
    bool store_points = false, strict = false;
    run->add_option("--problem", problem, "zoo problem id (see `list`)");
    run->add_option("--algo", algo, "cr | prox-gda")
        ->check(CLI::IsMember({"cr", "prox-gda"}));
    run->add_option("--M", opt_M, "cubic parameter (cr; default 2*L2)");
    run->add_option("--eta-x", opt_eta_x, "x learning rate (prox-gda; default theory rate)");
    run->add_option("--eta-y", opt_eta_y, "y learning rate (prox-gda; default 1/L)");
    run->add_option("--max-iters", max_iters, "iteration cap");
    run->add_option("--grad-tol", opt_grad_tol, "gradient stopping tolerance (cr)");
    run->add_option("--step-tol", opt_step_tol, "step stopping tolerance (prox-gda)");
    run->add_option("--burn-in", burn_in, "burn-in for rate fits (default max(10, n/5))");
    run->add_option("--seed", seed, "seed for problem generation and starts");
    run->add_option("--out", out_dir, "output directory")->envname("KLOPTIM_OUT");
    run->add_flag("--store-points", store_points, "also write the iterate points CSV");
    run->add_flag("--strict", strict, "exit nonzero when a monitor hard-fails");
    run->add_option("--config", config_path, "key=value config file ([cr]/[gda] sections)");

    // ---- suite ----
    auto* suite = app.add_subcommand("suite", "run the acceptance matrix");
    std::size_t jobs = 0;
    std::string filter;
    std::uint64_t suite_seed = 20240401;
    std::string suite_out;
    bool inject_bug = false;
    suite->add_option("--jobs", jobs, "worker count (default: hardware)");
    suite->add_option("--filter", filter, "only criteria whose id/tag contains this");
    suite->add_option("--seed", suite_seed, "suite seed");
    suite->add_option("--out", suite_out, "scratch directory")->envname("KLOPTIM_OUT");
    suite->add_flag("--inject-subsolver-bug", inject_bug)->group("");  // test fixture

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "classify an error column of a trace CSV");
    std::string trace_path, column;
    long long fit_burn_in = -1;
    fit->add_option("--trace", trace_path, "trace CSV path")->required();
    fit->add_option("--column", column, "column to classify (e.g. r, dist, H)")->required();
    fit->add_option("--burn-in", fit_burn_in, "burn-in (default max(10, n/5))");

    // ---- list ----
    auto* list = app.add_subcommand("list", "enumerate the problem zoo");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& [pattern, doc] : kloptim::zoo_catalog())
                std::printf("%-72s %s\n", pattern.c_str(), doc.c_str());
            return kExitOk;
        }

        if (fit->parsed()) {
            kloptim::CsvTable table;
            try {
                table = kloptim::read_csv(trace_path);
            } catch (const std::runtime_error& e) {
                std::cerr << e.what() << "\n";
                return kExitIo;
            }
            if (!table.has_column(column)) {
                std::cerr << "fit: no column named '" << column
                          << "' (available: " << table.column_list() << ")\n";
                return kExitBadParams;
            }
            std::vector<double> errors;
            for (double v : table.column(column))
                if (std::isfinite(v)) errors.push_back(v);
            const std::size_t burn = fit_burn_in >= 0
                                         ? static_cast<std::size_t>(fit_burn_in)
                                         : kloptim::default_burn_in(errors.size());
            print_report(kloptim::classify_rate(errors, burn));
            const std::string script = kloptim::write_fit_plot_script(trace_path, column);
            std::printf("plot script: %s\n", script.c_str());
            return kExitOk;
        }

        if (suite->parsed()) {
            kloptim::testing::inject_subsolver_bug = inject_bug;
            kloptim::SuiteOptions opts;
            opts.jobs = jobs;
            opts.filter = filter;
            opts.seed = suite_seed;
            opts.out_dir = suite_out.empty() ? "kloptim_suite_out" : suite_out;
            const auto result = kloptim::run_acceptance_suite(opts);
            std::printf("%s", kloptim::format_suite_table(result).c_str());
            if (result.rows.empty()) {
                std::printf("warning: filter '%s' matched no criteria\n", filter.c_str());
                return kExitOk;
            }
            return result.all_pass ? kExitOk : kExitMonitorFailure;
        }

        // ---- run ----
        kloptim::ExperimentConfig cfg;
        if (!config_path.empty()) {
            const FileConfig fc = read_config_file(config_path);
            auto get = [](const std::map<std::string, std::string>& m, const char* k)
                -> std::optional<std::string> {
                auto it = m.find(k);
                if (it == m.end()) return std::nullopt;
                return it->second;
            };
            if (auto v = get(fc.global, "problem"); v && problem.empty()) problem = *v;
            if (auto v = get(fc.global, "algo"); v && run->count("--algo") == 0) algo = *v;
            if (auto v = get(fc.global, "max-iters"); v && run->count("--max-iters") == 0)
                max_iters = std::stoull(*v);
            if (auto v = get(fc.global, "seed"); v && run->count("--seed") == 0)
                seed = std::stoull(*v);
            if (auto v = get(fc.global, "out"); v && out_dir.empty()) out_dir = *v;
            if (auto v = get(fc.global, "store-points"); v && run->count("--store-points") == 0)
                store_points = *v == "true" || *v == "1";
            if (auto v = get(fc.global, "strict"); v && run->count("--strict") == 0)
                strict = *v == "true" || *v == "1";
            if (auto v = get(fc.global, "burn-in"); v && burn_in < 0)
                burn_in = std::stoll(*v);
            if (auto v = get(fc.cr, "M"); v && run->count("--M") == 0) opt_M = std::stod(*v);
            if (auto v = get(fc.cr, "grad-tol"); v && run->count("--grad-tol") == 0)
                opt_grad_tol = std::stod(*v);
            if (auto v = get(fc.gda, "eta-x"); v && run->count("--eta-x") == 0)
                opt_eta_x = std::stod(*v);
            if (auto v = get(fc.gda, "eta-y"); v && run->count("--eta-y") == 0)
                opt_eta_y = std::stod(*v);
            if (auto v = get(fc.gda, "step-tol"); v && run->count("--step-tol") == 0)
                opt_step_tol = std::stod(*v);
        }
        if (problem.empty()) {
            std::cerr << "run: --problem is required (see `kloptim list`)\n";
            return kExitBadParams;
        }

        try {
            (void)kloptim::resolve_problem(problem, seed);
        } catch (const kloptim::InputError& e) {
            std::cerr << e.what() << "\n";
            return kExitUnknownProblem;
        }

        cfg.problem_id = problem;
        cfg.algo = algo == "cr" ? kloptim::Algo::cr : kloptim::Algo::prox_gda;
        if (opt_M > 0.0) cfg.M = opt_M;
        if (opt_eta_x > 0.0) cfg.eta_x = opt_eta_x;
        if (opt_eta_y > 0.0) cfg.eta_y = opt_eta_y;
        if (opt_grad_tol > 0.0) cfg.grad_tol = opt_grad_tol;
        if (opt_step_tol > 0.0) cfg.step_tol = opt_step_tol;
        if (burn_in >= 0) cfg.burn_in = static_cast<std::size_t>(burn_in);
        cfg.max_iters = max_iters;
        cfg.seed = seed;
        cfg.output_dir = out_dir.empty() ? "." : out_dir;
        cfg.store_points = store_points;
        cfg.strict = strict;

        const auto bundle = kloptim::run_experiment(cfg);
        std::printf("trace:   %s\n", bundle.trace_csv.c_str());
        if (!bundle.points_csv.empty()) std::printf("points:  %s\n", bundle.points_csv.c_str());
        std::printf("summary: %s\n\n", bundle.summary_json.c_str());
        print_verdicts(bundle.summary);
        std::printf("\nmonitors: %s\n", bundle.monitors_ok ? "ok" : "HARD FAILURE");
        if (!bundle.monitors_ok && strict) return kExitMonitorFailure;
        return kExitOk;
    } catch (const kloptim::InputError& e) {
        std::cerr << e.what() << "\n";
        return kExitBadParams;
    } catch (const kloptim::InsufficientDataError& e) {
        std::cerr << e.what() << "\n";
        return kExitBadParams;
    } catch (const std::ios_base::failure& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        const std::string msg = e.what();
        return msg.find("cannot open") != std::string::npos ? kExitIo : kExitOther;
    }
}
