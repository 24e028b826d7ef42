#include "kloptim/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "kloptim/cr.hpp"
#include "kloptim/errors.hpp"
#include "kloptim/gda.hpp"
#include "kloptim/trace_io.hpp"
#include "kloptim/zoo.hpp"

namespace kloptim {

namespace {

using nlohmann::json;

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
                   ? c
                   : '_';
    return out;
}

json report_to_json(const RateReport& rep) {
    json j;
    j["class"] = to_string(rep.cls);
    if (rep.linear_ratio) j["linear_ratio"] = *rep.linear_ratio;
    if (rep.sublinear_exponent) j["sublinear_exponent"] = *rep.sublinear_exponent;
    if (rep.superlinear_order) j["superlinear_order"] = *rep.superlinear_order;
    j["burn_in"] = rep.burn_in;
    j["fit_residual"] = rep.fit_residual;
    if (rep.degenerate) j["degenerate"] = true;
    return j;
}

json prediction_to_json(const RatePrediction& p) {
    json j;
    j["class"] = to_string(p.cls);
    if (p.superlinear_order) j["superlinear_order"] = *p.superlinear_order;
    if (p.sublinear_exponent) j["sublinear_exponent"] = *p.sublinear_exponent;
    return j;
}

// one verdict row: observed vs predicted class for a tracked sequence
json verdict_row(const std::string& sequence, const std::optional<RateReport>& rep,
                 const std::optional<RatePrediction>& pred) {
    json j;
    j["sequence"] = sequence;
    j["observed"] = rep ? report_to_json(*rep) : json("unclassified");
    j["predicted"] = pred ? prediction_to_json(*pred) : json("unknown-theta");
    j["match"] = rep && pred ? json(rep->cls == pred->cls) : json(nullptr);
    return j;
}

void write_points_csv(const std::string& path, const std::vector<Vec>& pts,
                      const char* index_name) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << index_name;
    if (!pts.empty())
        for (std::size_t i = 0; i < pts.front().size(); ++i) out << ",x" << i;
    out << "\n";
    for (std::size_t k = 0; k < pts.size(); ++k) {
        out << k;
        for (double v : pts[k]) out << ',' << fmt17(v);
        out << "\n";
    }
}

}  // namespace

std::vector<double> drop_trailing_zeros(std::vector<double> v) {
    while (!v.empty() && v.back() == 0.0) v.pop_back();
    return v;
}

std::optional<RateReport> classify_with_fallback(const std::vector<double>& errors,
                                                 std::optional<std::size_t> burn_in) {
    std::vector<std::size_t> candidates;
    if (burn_in)
        candidates.push_back(*burn_in);
    else
        candidates.push_back(default_burn_in(errors.size()));
    candidates.push_back(errors.size() / 5);
    // short superlinear traces: start at the local-convergence window instead
    for (std::size_t k = 0; k < errors.size(); ++k)
        if (errors[k] < 1e-1) {
            candidates.push_back(k);
            break;
        }
    candidates.push_back(0);

    for (std::size_t b : candidates) {
        if (b >= errors.size()) continue;
        try {
            return classify_rate(errors, b);
        } catch (const InsufficientDataError&) {
        } catch (const InputError&) {
            return std::nullopt;  // non-monotone or otherwise unusable
        }
    }
    return std::nullopt;
}

ResultBundle run_experiment(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    const Problem prob = resolve_problem(cfg.problem_id, cfg.seed);

    std::filesystem::create_directories(cfg.output_dir);
    const std::string stem =
        !cfg.name.empty() ? cfg.name
                          : sanitize(cfg.problem_id) +
                                (cfg.algo == Algo::cr ? "_cr" : "_gda");
    const std::string base = (std::filesystem::path(cfg.output_dir) / stem).string();

    ResultBundle bundle;
    bundle.trace_csv = base + ".csv";
    bundle.summary_json = base + ".json";

    json summary;
    json config_echo;
    config_echo["problem"] = cfg.problem_id;
    config_echo["problem_resolved"] = prob.id;
    config_echo["algo"] = cfg.algo == Algo::cr ? "cr" : "prox-gda";
    config_echo["max_iters"] = cfg.max_iters;
    config_echo["seed"] = cfg.seed;
    config_echo["output_dir"] = cfg.output_dir;
    config_echo["store_points"] = cfg.store_points;
    config_echo["strict"] = cfg.strict;

    json verdicts = json::array();
    json monitors;

    if (cfg.algo == Algo::cr) {
        if (!prob.smooth)
            throw InputError("run: problem '" + cfg.problem_id +
                             "' is a minimax instance; use --algo prox-gda");
        const SmoothOracle& o = *prob.smooth;

        CRConfig c;
        c.M = cfg.M.value_or(prob.default_M);
        c.max_iters = cfg.max_iters;
        c.grad_tol = cfg.grad_tol.value_or(1e-10);
        c.store_points = cfg.store_points;
        config_echo["M"] = c.M;
        config_echo["grad_tol"] = c.grad_tol;
        config_echo["neg_eig_tol"] = c.neg_eig_tol;
        config_echo["subsolver_tol"] = c.subsolver_tol;
        config_echo["burn_in"] =
            cfg.burn_in ? json(*cfg.burn_in) : json("auto (max(10, n/5))");

        const CRTrace trace = run_cr(o, prob.x0, c);
        write_cr_csv(bundle.trace_csv, trace);
        if (cfg.store_points) {
            bundle.points_csv = base + "_points.csv";
            write_points_csv(bundle.points_csv, trace.points, "k");
        }

        // monitor slack minima, normalized by 1 + |f|
        double min_dyn = 0.0;
        for (const auto& sl : dynamics_check(trace, o.lipschitz_hess, c.M)) {
            const double scale = 1.0 + std::fabs(trace.records[sl.k].f);
            min_dyn = std::min({min_dyn, sl.grad_slack / scale, sl.decrease_slack / scale,
                                sl.eig_slack / scale});
        }
        const auto chain = mu_chain_check(trace);
        monitors["dynamics_min_slack"] = min_dyn;
        monitors["mu_chain_min_slack"] = chain.min_slack;
        monitors["mu_chain_checked"] = chain.checked;
        monitors["mu_chain_skipped"] = chain.skipped;
        bundle.monitors_ok = min_dyn >= -1e-9 && chain.min_slack >= -1e-9;

        summary["final"] = {{"f", trace.records.back().f},
                            {"r", trace.records.back().r},
                            {"grad_norm", trace.records.back().grad_norm},
                            {"min_eig", trace.records.back().min_eig},
                            {"dist", trace.records.back().dist},
                            {"iterations", trace.records.size() - 1}};
        summary["terminated_by"] =
            trace.terminated_by == CRTermination::grad_and_eig_tol ? "grad_and_eig_tol"
            : trace.terminated_by == CRTermination::max_iters      ? "max_iters"
                                                                   : "stagnation";

        // rate reports and theta-indexed predictions
        const auto rep_r = classify_with_fallback(trace.column_r(), cfg.burn_in);
        const auto rep_dist = classify_with_fallback(trace.column_dist(), cfg.burn_in);
        const auto rep_var = classify_with_fallback(
            drop_trailing_zeros(trace.dist_to_final), cfg.burn_in);
        const auto rep_mu = classify_with_fallback(trace.column_mu_gap(), cfg.burn_in);

        std::optional<RatePrediction> pr_value, pr_dist, pr_var;
        if (o.kl_theta) {
            pr_value = predict_rates(*o.kl_theta, RateFamily::cr_value);
            pr_dist = predict_rates(*o.kl_theta, RateFamily::cr_distance);
            pr_var = predict_rates(*o.kl_theta, RateFamily::cr_variable);
        }
        verdicts.push_back(verdict_row("r", rep_r, pr_value));
        verdicts.push_back(verdict_row("dist", rep_dist, pr_dist));
        verdicts.push_back(verdict_row("dist_to_final", rep_var, pr_var));
        verdicts.push_back(verdict_row("mu_gap", rep_mu, pr_dist));

        std::vector<std::pair<double, double>> pairs;
        for (const auto& rec : trace.records) pairs.emplace_back(rec.r, rec.grad_norm);
        try {
            const auto est = estimate_theta(pairs, 0);
            summary["theta_estimate"] = {{"theta_hat", est.theta_hat},
                                         {"slope", est.slope},
                                         {"stderr", est.stderr_slope},
                                         {"n_points", est.n_points},
                                         {"degenerate", est.degenerate}};
            if (o.kl_theta) summary["theta_known"] = *o.kl_theta;
        } catch (const InsufficientDataError& e) {
            summary["theta_estimate"] = e.what();
        }
    } else {
        if (!prob.minimax)
            throw InputError("run: problem '" + cfg.problem_id +
                             "' is a smooth instance; use --algo cr");
        const MinimaxOracle& o = *prob.minimax;

        GDAConfig c;
        const auto defaults = default_learning_rates(o.L, o.mu);
        c.eta_x = cfg.eta_x.value_or(defaults.first);
        c.eta_y = cfg.eta_y.value_or(defaults.second);
        c.max_iters = cfg.max_iters;
        c.step_tol = cfg.step_tol.value_or(1e-10);
        c.store_points = cfg.store_points;
        config_echo["eta_x"] = c.eta_x;
        config_echo["eta_y"] = c.eta_y;
        config_echo["step_tol"] = c.step_tol;
        config_echo["burn_in"] =
            cfg.burn_in ? json(*cfg.burn_in) : json("auto (max(10, n/5))");

        const GDATrace trace = run_prox_gda(o, prob.x0, prob.y0, c);
        write_gda_csv(bundle.trace_csv, trace);
        if (cfg.store_points) {
            bundle.points_csv = base + "_points.csv";
            write_points_csv(bundle.points_csv, trace.points_x, "t");
        }

        double min_lyap = 0.0;
        for (std::size_t t = 0; const double s : lyapunov_decrease_check(trace, o, c)) {
            min_lyap = std::min(min_lyap,
                                s / (1.0 + std::fabs(trace.records[t].lyapunov)));
            ++t;
        }
        monitors["lyapunov_min_slack"] = min_lyap;
        bundle.monitors_ok = min_lyap >= -1e-12;
        if (c.eta_y <= 1.0 / o.L * (1.0 + 1e-12)) {
            double max_ratio = 0.0;
            for (const auto& r : ystar_contraction_check(o, trace, c.eta_y))
                if (r) max_ratio = std::max(max_ratio, *r);
            monitors["contraction_max_ratio"] = max_ratio;
            monitors["contraction_bound"] = 1.0 - 1.0 / o.kappa;
            bundle.monitors_ok =
                bundle.monitors_ok && max_ratio <= 1.0 - 1.0 / o.kappa + 1e-9;
        }

        const auto& back = trace.records.back();
        summary["final"] = {{"H", back.lyapunov},
                            {"phi_plus_g", back.phi_plus_g},
                            {"y_gap", back.y_gap},
                            {"iterations", trace.records.size() - 1}};
        summary["terminated_by"] =
            trace.terminated_by == GDATermination::step_tol ? "step_tol" : "max_iters";
        summary["ystar_oracle_tol"] = trace.ystar_tol;

        std::optional<RateReport> rep_h;
        if (o.h_star) {
            std::vector<double> herr;
            for (const auto& rec : trace.records)
                herr.push_back(std::max(rec.lyapunov - *o.h_star, 0.0));
            rep_h = classify_with_fallback(herr, cfg.burn_in);
        }
        const auto rep_dx =
            classify_with_fallback(drop_trailing_zeros(trace.column_dist_x()), cfg.burn_in);
        const auto rep_dy =
            classify_with_fallback(drop_trailing_zeros(trace.dist_y), cfg.burn_in);

        std::optional<RatePrediction> pr_value, pr_var;
        if (o.kl_theta) {
            pr_value = predict_rates(*o.kl_theta, RateFamily::gda_value);
            pr_var = predict_rates(*o.kl_theta, RateFamily::gda_variable);
        }
        verdicts.push_back(verdict_row("H_minus_Hstar", rep_h, pr_value));
        verdicts.push_back(verdict_row("dist_x", rep_dx, pr_var));
        verdicts.push_back(verdict_row("dist_y", rep_dy, pr_var));
    }

    summary["config"] = config_echo;
    summary["monitors"] = monitors;
    summary["monitors_ok"] = bundle.monitors_ok;
    summary["verdicts"] = verdicts;
    summary["trace_csv"] = bundle.trace_csv;
    if (!bundle.points_csv.empty()) summary["points_csv"] = bundle.points_csv;
    summary["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    std::ofstream out(bundle.summary_json, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + bundle.summary_json);
    out << summary.dump(2) << "\n";
    bundle.summary = std::move(summary);
    return bundle;
}

}  // namespace kloptim
