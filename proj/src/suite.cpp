#include "kloptim/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "kloptim/cr.hpp"
#include "kloptim/cubic.hpp"
#include "kloptim/errors.hpp"
#include "kloptim/experiment.hpp"
#include "kloptim/gda.hpp"
#include "kloptim/ratelab.hpp"
#include "kloptim/rng.hpp"
#include "kloptim/zoo.hpp"

namespace kloptim {

namespace {

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < std::min(jobs, n); ++w)
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : workers) t.join();
}

// ---- criterion 1 oracles -------------------------------------------------

CubicModel random_cubic(Rng& rng, std::size_t max_dim) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * max_dim);
    CubicModel m;
    m.g = rng.uniform_vec(n, -5.0, 5.0);
    m.H = rng.symmetric(n, -5.0, 5.0);
    m.M = rng.uniform(0.1, 10.0);
    return m;
}

// hard case by construction: zero gradient on the bottom eigenspace and M
// small enough that the interior secular root is absent
CubicModel hard_case_cubic(Rng& rng, std::size_t n, bool exact_zero) {
    const auto Q = rng.orthogonal(n);
    Vec eigs(n);
    eigs[0] = rng.uniform(-3.0, -0.5);
    for (std::size_t i = 1; i < n; ++i) eigs[i] = eigs[0] + 0.3 + rng.uniform(0.0, 4.0);
    Vec d(n);
    d[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) d[i] = rng.uniform(-2.0, 2.0);
    const double M = rng.uniform(0.3, 3.0);
    double n_perp2 = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double w = d[i] / (eigs[i] - eigs[0]);
        n_perp2 += w * w;
    }
    const double target = rng.uniform(0.2, 0.8) * 2.0 * (-eigs[0]) / M;
    const double factor = target / std::sqrt(n_perp2);
    for (std::size_t i = 1; i < n; ++i) d[i] *= factor;
    if (!exact_zero) d[0] = 1e-14 * norm2(d);

    CubicModel m;
    m.M = M;
    m.H = SymMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += Q[i * n + k] * eigs[k] * Q[j * n + k];
            m.H.set(i, j, s);
        }
    m.g.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) m.g[i] += Q[i * n + k] * d[k];
    return m;
}

// full scan of [-10,10]^2 at step 5e-3, then two local refinement rounds
double grid_min_2d(const CubicModel& m) {
    const double g1 = m.g[0], g2 = m.g[1];
    const double h11 = m.H(0, 0), h12 = m.H(0, 1), h22 = m.H(1, 1);
    const double c = m.M / 6.0;
    auto eval = [&](double s1, double s2) {
        const double q = 0.5 * (h11 * s1 * s1 + 2.0 * h12 * s1 * s2 + h22 * s2 * s2);
        const double n2 = s1 * s1 + s2 * s2;
        return g1 * s1 + g2 * s2 + q + c * n2 * std::sqrt(n2);
    };
    double best = std::numeric_limits<double>::infinity();
    double b1 = 0.0, b2 = 0.0;
    const double step = 5e-3;
    const long n = 4000;  // [-10, 10] at 5e-3
    for (long i = 0; i <= n; ++i) {
        const double s1 = -10.0 + step * static_cast<double>(i);
        for (long j = 0; j <= n; ++j) {
            const double s2 = -10.0 + step * static_cast<double>(j);
            const double v = eval(s1, s2);
            if (v < best) {
                best = v;
                b1 = s1;
                b2 = s2;
            }
        }
    }
    double width = step;
    for (int round = 0; round < 2; ++round) {
        const double fine = width / 20.0;
        const double c1 = b1, c2 = b2;
        for (int i = -20; i <= 20; ++i)
            for (int j = -20; j <= 20; ++j) {
                const double v = eval(c1 + fine * i, c2 + fine * j);
                if (v < best) {
                    best = v;
                    b1 = c1 + fine * i;
                    b2 = c2 + fine * j;
                }
            }
        width = fine;
    }
    return best;
}

// ---- CR battery shared by criteria 2, 6, 8 --------------------------------

struct BatteryRun {
    std::string id;
    SmoothOracle oracle;
    CRTrace trace;
};

std::vector<BatteryRun> cr_battery(std::uint64_t seed) {
    struct Spec {
        const char* id;
        double M;  // 0 = default (2 L2, or damped fallback)
        std::size_t max_iters;
    };
    const Spec specs[] = {
        {"power2:d=6", 20.0, 10000},  {"power3:d=1", 0.0, 10000},
        {"power3:d=5", 0.0, 10000},   {"power4:d=10", 0.0, 10000},
        {"power6:d=10,x0=0.5", 0.0, 10000}, {"quad:cond=1", 20.0, 10000},
        {"quad:cond=10", 20.0, 10000}, {"quad:cond=100", 20.0, 10000},
        {"saddle:2d", 0.0, 10000},
    };
    std::vector<BatteryRun> runs;
    for (const auto& s : specs) {
        const Problem prob = resolve_problem(s.id, seed);
        CRConfig cfg;
        cfg.M = s.M > 0.0 ? s.M : prob.default_M;
        cfg.max_iters = s.max_iters;
        runs.push_back({s.id, *prob.smooth, run_cr(*prob.smooth, prob.x0, cfg)});
    }
    return runs;
}

std::vector<double> truncate_at_floor(const std::vector<double>& e, double floor) {
    std::vector<double> out;
    for (double v : e) {
        if (v <= floor) break;
        out.push_back(v);
    }
    return out;
}

// burn to the local-convergence window (first entry below 0.1)
std::size_t window_start(const std::vector<double>& e) {
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] < 1e-1) return k;
    return 0;
}

std::string class_name(const std::optional<RateReport>& rep) {
    return rep ? to_string(rep->cls) : "unclassified";
}

// ---- criteria -------------------------------------------------------------

CriterionRow c1_subsolver(const SuiteOptions& opts) {
    CriterionRow row{"1", "cubic subsolver certificates (1000 random + 60 hard + 200 grid)",
                     "", "resid<=1e-8, psd>=-1e-10, grid gap<=1e-4", "pinned", false};
    Rng rng(opts.seed);

    double max_stat = 0.0, max_sec = 0.0, min_psd = 0.0, max_gap = -1e300;
    int hard_count = 0;
    bool ok = true;

    std::vector<CubicModel> random_models, hard_models, grid_models;
    for (int i = 0; i < 1000; ++i) random_models.push_back(random_cubic(rng, 10));
    for (int i = 0; i < 60; ++i)
        hard_models.push_back(hard_case_cubic(rng, 2 + i % 7, i % 2 == 0));
    for (int i = 0; i < 200; ++i) {
        CubicModel m;
        m.g = rng.uniform_vec(2, -5.0, 5.0);
        m.H = rng.symmetric(2, -5.0, 5.0);
        m.M = rng.uniform(0.1, 10.0);
        grid_models.push_back(m);
    }

    for (const auto& m : random_models) {
        const auto sol = solve_cubic(m, 1e-10);
        const auto cert = verify_global_optimality(m, sol, 1e-8);
        max_stat = std::max(max_stat, cert.stationarity_residual / (1.0 + norm2(m.g)));
        max_sec = std::max(max_sec, cert.secular_residual / (1.0 + sol.lam));
        min_psd = std::min(min_psd, cert.psd_margin);
    }
    for (const auto& m : hard_models) {
        const auto sol = solve_cubic(m, 1e-10);
        hard_count += sol.hard_case ? 1 : 0;
        const auto cert = verify_global_optimality(m, sol, 1e-8);
        max_stat = std::max(max_stat, cert.stationarity_residual / (1.0 + norm2(m.g)));
        max_sec = std::max(max_sec, cert.secular_residual / (1.0 + sol.lam));
        min_psd = std::min(min_psd, cert.psd_margin);
    }

    std::vector<double> gaps(grid_models.size());
    parallel_for(grid_models.size(), opts.jobs, [&](std::size_t i) {
        const auto sol = solve_cubic(grid_models[i], 1e-10);
        gaps[i] = model_value(grid_models[i], sol.step) - grid_min_2d(grid_models[i]);
    });
    for (double g : gaps) max_gap = std::max(max_gap, g);

    ok = max_stat <= 1e-8 && max_sec <= 1e-8 && min_psd >= -1e-10 && max_gap <= 1e-4 &&
         hard_count >= 50;
    row.observed = "stat=" + fmt("%.2e", max_stat) + " sec=" + fmt("%.2e", max_sec) +
                   " psd=" + fmt("%.2e", min_psd) + " gap=" + fmt("%.2e", max_gap) +
                   " hard=" + std::to_string(hard_count);
    row.pass = ok;
    return row;
}

CriterionRow c2_dynamics(const SuiteOptions& opts) {
    CriterionRow row{"2", "CR dynamics inequalities on every zoo run with M >= L2", "",
                     "slacks >= 0", "-1e-9 * (1+|f|)", false};
    double worst = 0.0;
    for (const auto& run : cr_battery(opts.seed)) {
        for (const auto& sl :
             dynamics_check(run.trace, run.oracle.lipschitz_hess, run.trace.config.M)) {
            const double scale = 1.0 + std::fabs(run.trace.records[sl.k].f);
            worst = std::min({worst, sl.grad_slack / scale, sl.decrease_slack / scale,
                              sl.eig_slack / scale});
        }
    }
    row.observed = "min normalized slack = " + fmt("%.2e", worst);
    row.pass = worst >= -1e-9;
    return row;
}

CriterionRow c3_superlinear_quads(const SuiteOptions& opts) {
    CriterionRow row{"3", "CR on quadratics cond {1,10,100}: superlinear, order >= 4/3-0.1",
                     "", "superlinear, q >= 1.2333", "order window (1e-14, 1e-1)", false};
    bool ok = true;
    std::string obs;
    for (double cond : {1.0, 10.0, 100.0}) {
        const Problem prob = resolve_problem("quad:cond=" + fmt("%g", cond), opts.seed);
        CRConfig cfg;
        cfg.M = 20.0;
        const auto trace = run_cr(*prob.smooth, prob.x0, cfg);
        const auto r = trace.column_r();
        const auto w = truncate_at_floor(r, 1e-14);
        const auto rep = classify_rate(
            std::vector<double>(w.begin() + window_start(w), w.end()), 0);
        const double q = superlinear_order(r);
        ok = ok && rep.cls == RateClass::superlinear && q >= 4.0 / 3.0 - 0.1;
        obs += "cond" + fmt("%g", cond) + ":" + to_string(rep.cls) + ",q=" + fmt("%.2f", q) +
               " ";
    }
    row.observed = obs;
    row.pass = ok;
    return row;
}

CriterionRow c4_linear_power3(const SuiteOptions& opts) {
    CriterionRow row{"4", "CR on |x|^3 (d=1, M=6): linear with ratio (2-sqrt2)^3", "",
                     "linear, ratio 0.20101", "+-5%", false};
    const Problem prob = resolve_problem("power3:d=1", opts.seed);
    CRConfig cfg;
    cfg.M = 6.0;
    const auto trace = run_cr(*prob.smooth, prob.x0, cfg);
    const auto rep = classify_rate(trace.column_r(),
                                   default_burn_in(trace.records.size()));
    const double want = std::pow(2.0 - std::sqrt(2.0), 3.0);
    row.pass = rep.cls == RateClass::linear && rep.linear_ratio &&
               std::fabs(*rep.linear_ratio - want) <= 0.05 * want;
    row.observed = class_name(rep) + ", ratio=" +
                   (rep.linear_ratio ? fmt("%.5f", *rep.linear_ratio) : "n/a");
    return row;
}

CriterionRow c5_sublinear_powers(const SuiteOptions& opts) {
    CriterionRow row{"5",
                     "CR sublinear exponents: power4 r/variable, power6 r", "",
                     "p4 in [6.4,9.6], var in [1.6,2.4], p6 in [3.2,4.8]", "+-20%", false};
    const Problem p4 = resolve_problem("power4:d=10", opts.seed);
    CRConfig cfg4;
    cfg4.M = p4.default_M;
    const auto t4 = run_cr(*p4.smooth, p4.x0, cfg4);
    const auto rep4 = classify_rate(t4.column_r(), default_burn_in(t4.records.size()));
    // dist to the limit point (the origin) is the dist column for power norms
    const auto var4 = classify_rate(t4.column_dist(), default_burn_in(t4.records.size()));

    const Problem p6 = resolve_problem("power6:d=10,x0=0.5", opts.seed);
    CRConfig cfg6;
    cfg6.M = p6.default_M;
    cfg6.max_iters = 10000;
    const auto t6 = run_cr(*p6.smooth, p6.x0, cfg6);
    const auto rep6 = classify_rate(t6.column_r(), default_burn_in(t6.records.size()));

    const bool ok4 = rep4.cls == RateClass::sublinear && rep4.sublinear_exponent &&
                     *rep4.sublinear_exponent >= 6.4 && *rep4.sublinear_exponent <= 9.6;
    const bool okv = var4.cls == RateClass::sublinear && var4.sublinear_exponent &&
                     *var4.sublinear_exponent >= 1.6 && *var4.sublinear_exponent <= 2.4;
    const bool ok6 = rep6.cls == RateClass::sublinear && rep6.sublinear_exponent &&
                     *rep6.sublinear_exponent >= 3.2 && *rep6.sublinear_exponent <= 4.8;
    row.observed = "p4=" + fmt("%.2f", rep4.sublinear_exponent.value_or(-1)) +
                   " var=" + fmt("%.2f", var4.sublinear_exponent.value_or(-1)) +
                   " p6=" + fmt("%.2f", rep6.sublinear_exponent.value_or(-1));
    row.pass = ok4 && okv && ok6;
    return row;
}

CriterionRow c6_finite_length(const SuiteOptions& opts) {
    CriterionRow row{"6", "finite length: Delta_k finite and >= ||x_k - x_final||", "",
                     "Delta finite, lower-bounds distance", "-1e-8", false};
    bool ok = true;
    double worst = 0.0;
    for (const auto& run : cr_battery(opts.seed)) {
        const auto delta = tail_lengths(run.trace);
        for (std::size_t k = 0; k < delta.size(); ++k) {
            ok = ok && std::isfinite(delta[k]);
            worst = std::min(worst, delta[k] - run.trace.dist_to_final[k]);
        }
    }
    row.observed = "min(Delta_k - ||x_k - x_final||) = " + fmt("%.2e", worst);
    row.pass = ok && worst >= -1e-8;
    return row;
}

CriterionRow c7_error_bound(const SuiteOptions& opts) {
    CriterionRow row{"7", "KL error bound slope >= theta - 0.03 on power families", "",
                     "slope >= theta - 0.03", "0.03", false};
    Rng rng(opts.seed + 7);
    bool ok = true;
    std::string obs;
    for (double p : {2.0, 3.0, 4.0, 6.0}) {
        const auto o = make_power_norm(4, p, 1.0);
        std::vector<Vec> pts;
        for (int i = 0; i < 120; ++i) {
            const double u = std::pow(10.0, -1.5 * rng.uniform());
            pts.push_back(scaled(rng.unit_vec(4), u));
        }
        const auto fit = error_bound_check(o, pts);
        const double theta = *o.kl_theta;
        ok = ok && fit.slope >= theta - 0.03;
        obs += "p" + fmt("%g", p) + ":" + fmt("%.3f", fit.slope) + " ";
    }
    row.observed = obs + "(thetas 0.5, 0.333, 0.25, 0.167)";
    row.pass = ok;
    return row;
}

CriterionRow c8_mu_chain(const SuiteOptions& opts) {
    CriterionRow row{"8", "mu-gap chain and class match with the distance sequence", "",
                     "chain slack >= -1e-9; classes match", "1e-9", false};
    double worst = 0.0;
    bool ok = true;
    for (const auto& run : cr_battery(opts.seed)) {
        const auto chain = mu_chain_check(run.trace);
        worst = std::min(worst, chain.min_slack);
    }
    std::string obs = "chain min slack=" + fmt("%.2e", worst) + "; ";
    // class match on power-norm runs
    for (const char* id : {"power3:d=5", "power4:d=10", "power6:d=10,x0=0.5"}) {
        const Problem prob = resolve_problem(id, opts.seed);
        CRConfig cfg;
        cfg.M = prob.default_M;
        cfg.max_iters = 10000;
        const auto trace = run_cr(*prob.smooth, prob.x0, cfg);
        const auto rep_mu = classify_with_fallback(trace.column_mu_gap(), std::nullopt);
        const auto rep_d = classify_with_fallback(trace.column_dist(), std::nullopt);
        const bool match = rep_mu && rep_d && rep_mu->cls == rep_d->cls;
        ok = ok && match;
        obs += std::string(id) + ":" + class_name(rep_mu) + "/" + class_name(rep_d) + " ";
    }
    row.observed = obs;
    row.pass = ok && worst >= -1e-9;
    return row;
}

CriterionRow c9_saddle_escape(const SuiteOptions& opts) {
    CriterionRow row{"9", "saddle escape from 50 perturbed starts (radius 0.1)", "",
                     "min_eig >= -1e-6, dist <= 1e-6", "1e-6", false};
    const Problem prob = resolve_problem("saddle:2d", opts.seed);
    const auto& o = *prob.smooth;
    CRConfig cfg;
    cfg.M = prob.default_M;
    Rng rng(opts.seed + 9);
    double worst_eig = 0.0, worst_dist = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Vec x0 = scaled(rng.unit_vec(2), 0.1 * (0.02 + 0.98 * rng.uniform()));
        const auto trace = run_cr(o, x0, cfg);
        worst_eig = std::min(worst_eig, trace.records.back().min_eig);
        worst_dist = std::max(worst_dist, o.solution_distance(trace.x_final));
    }
    row.observed =
        "min final eig=" + fmt("%.2e", worst_eig) + ", max dist=" + fmt("%.2e", worst_dist);
    row.pass = worst_eig >= -1e-6 && worst_dist <= 1e-6;
    return row;
}

const char* const kMinimaxZoo[] = {"bilinear:1d",
                                   "bilinear:dx=2,dy=3,mu=2,a=random,ridge=0.5",
                                   "bilinear:decoupled", "bilinear:1d,g=l1:0.5"};

CriterionRow c10_lyapunov(const SuiteOptions& opts) {
    CriterionRow row{"10", "GDA Lyapunov monotone + Corollary-1 asymptotics", "",
                     "slack >= -1e-12 rel; final steps/gap <= 10*step_tol", "pinned",
                     false};
    double worst = 0.0, worst_final = 0.0;
    for (const char* id : kMinimaxZoo) {
        const Problem prob = resolve_problem(id, opts.seed);
        const auto& o = *prob.minimax;
        GDAConfig cfg;
        std::tie(cfg.eta_x, cfg.eta_y) = default_learning_rates(o.L, o.mu);
        cfg.step_tol = 1e-10;
        cfg.max_iters = 10000;
        const auto trace = run_prox_gda(o, prob.x0, prob.y0, cfg);
        std::size_t t = 0;
        for (const double s : lyapunov_decrease_check(trace, o, cfg)) {
            worst = std::min(worst, s / (1.0 + std::fabs(trace.records[t].lyapunov)));
            ++t;
        }
        // final x-step, y-step, y-gap against 10 * step_tol
        const auto& last = trace.records.back();
        double final_max = last.y_gap;
        for (auto it = trace.records.rbegin(); it != trace.records.rend(); ++it)
            if (it->x_step_norm) {
                final_max = std::max({final_max, *it->x_step_norm, *it->y_step_norm});
                break;
            }
        worst_final = std::max(worst_final, final_max / (10.0 * cfg.step_tol));
    }
    row.observed = "min rel slack=" + fmt("%.2e", worst) +
                   ", final/(10*tol)=" + fmt("%.2f", worst_final);
    row.pass = worst >= -1e-12 && worst_final <= 1.0;
    return row;
}

CriterionRow c11_gda_linear(const SuiteOptions& opts) {
    CriterionRow row{"11", "GDA theta=1/2: H-H* and dist_x converge linearly, stable ratio",
                     "", "linear; ratio stable +-10%", "10%", false};
    bool ok = true;
    std::string obs;
    for (const char* id : {"bilinear:1d", "bilinear:dx=2,dy=3,mu=2,a=random,ridge=0.5"}) {
        const Problem prob = resolve_problem(id, opts.seed);
        const auto& o = *prob.minimax;
        GDAConfig cfg;
        std::tie(cfg.eta_x, cfg.eta_y) = default_learning_rates(o.L, o.mu);
        cfg.step_tol = 1e-10;
        cfg.max_iters = 10000;
        const auto trace = run_prox_gda(o, prob.x0, prob.y0, cfg);

        std::vector<double> herr;
        for (const auto& rec : trace.records)
            herr.push_back(std::max(rec.lyapunov - *o.h_star, 0.0));
        const auto usable = truncate_at_floor(herr, ratecfg::kNoiseFloor);
        const auto rep = classify_rate(usable, default_burn_in(usable.size()));

        // ratio stability: fit the two quarters of the last half separately
        const std::size_t half = usable.size() / 2;
        const std::size_t q3 = half + (usable.size() - half) / 2;
        const auto fit_ratio = [&](std::size_t lo, std::size_t hi) {
            std::vector<double> xs, ys;
            for (std::size_t k = lo; k < hi; ++k) {
                xs.push_back(static_cast<double>(k));
                ys.push_back(std::log(usable[k]));
            }
            return std::exp(linear_fit(xs, ys).slope);
        };
        const double ra = fit_ratio(half, q3);
        const double rb = fit_ratio(q3, usable.size());
        const bool stable = std::fabs(ra - rb) <= 0.1 * std::max(ra, rb);

        const auto rep_dx = classify_with_fallback(
            drop_trailing_zeros(trace.column_dist_x()), std::nullopt);
        const bool dx_linear = rep_dx && rep_dx->cls == RateClass::linear;

        ok = ok && rep.cls == RateClass::linear && rep.linear_ratio &&
             *rep.linear_ratio < 1.0 && stable && dx_linear;
        obs += std::string("[") + id + "] H:" + to_string(rep.cls) + " r=" +
               fmt("%.4f", rep.linear_ratio.value_or(-1)) + " halves=" + fmt("%.4f", ra) +
               "/" + fmt("%.4f", rb) + " dx:" + class_name(rep_dx) + " ";
    }
    row.observed = obs;
    row.pass = ok;
    return row;
}

CriterionRow c12_theta_estimator(const SuiteOptions& opts) {
    CriterionRow row{"12", "theta estimator: analytic +-0.03, CR traces +-0.07", "",
                     "|theta_hat - theta| within bounds", "0.03 / 0.07", false};
    bool ok = true;
    double worst_analytic = 0.0, worst_trace = 0.0;

    for (double p : {2.0, 3.0, 4.0, 6.0}) {
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < 100; ++i) {
            const double u = std::pow(10.0, -3.0 * i / 99.0);
            pairs.emplace_back(std::pow(u, p), p * std::pow(u, p - 1.0));
        }
        const auto est = estimate_theta(pairs, 0);
        worst_analytic = std::max(worst_analytic, std::fabs(est.theta_hat - 1.0 / p));
    }

    struct TraceSpec {
        const char* id;
        double M;
        double theta;
    };
    const TraceSpec specs[] = {{"power2:d=6", 300.0, 0.5},
                               {"power3:d=1", 6.0, 1.0 / 3.0},
                               {"power4:d=10", 0.0, 0.25},
                               {"power6:d=10,x0=0.5", 0.0, 1.0 / 6.0}};
    for (const auto& s : specs) {
        const Problem prob = resolve_problem(s.id, opts.seed);
        CRConfig cfg;
        cfg.M = s.M > 0.0 ? s.M : prob.default_M;
        cfg.max_iters = 10000;
        const auto trace = run_cr(*prob.smooth, prob.x0, cfg);
        std::vector<std::pair<double, double>> pairs;
        for (const auto& rec : trace.records) pairs.emplace_back(rec.r, rec.grad_norm);
        const auto est = estimate_theta(pairs, 0);
        worst_trace = std::max(worst_trace, std::fabs(est.theta_hat - s.theta));
    }
    ok = worst_analytic <= 0.03 && worst_trace <= 0.07;
    row.observed = "analytic max err=" + fmt("%.4f", worst_analytic) +
                   ", trace max err=" + fmt("%.4f", worst_trace);
    row.pass = ok;
    return row;
}

CriterionRow c13_classifier_selftest(const SuiteOptions&) {
    CriterionRow row{"13", "rate classifier self-test on synthesized sequences", "",
                     "classes correct, parameters +-10%", "10%", false};
    bool ok = true;

    const auto fin = classify_rate({1.0, 0.2, 0.01, 0.0, 0.0}, 0);
    ok = ok && fin.cls == RateClass::finite_step;

    std::vector<double> lin;
    for (int k = 0; k < 40; ++k) lin.push_back(std::pow(0.7, k));
    const auto rl = classify_rate(lin, 0);
    ok = ok && rl.cls == RateClass::linear && rl.linear_ratio &&
         std::fabs(*rl.linear_ratio - 0.7) <= 0.07;

    std::vector<double> sub;
    for (int k = 1; k <= 120; ++k) sub.push_back(std::pow(k, -4.0));
    const auto rs = classify_rate(sub, 0);
    ok = ok && rs.cls == RateClass::sublinear && rs.sublinear_exponent &&
         std::fabs(*rs.sublinear_exponent - 4.0) <= 0.4;

    std::vector<double> sup{0.3};
    while (sup.back() > 1e-14) sup.push_back(std::pow(sup.back(), 1.5));
    const auto rq = classify_rate(sup, 0);
    ok = ok && rq.cls == RateClass::superlinear && rq.superlinear_order &&
         std::fabs(*rq.superlinear_order - 1.5) <= 0.15;

    row.observed = "finite:" + to_string(fin.cls) + " lin r=" +
                   fmt("%.3f", rl.linear_ratio.value_or(-1)) + " sub p=" +
                   fmt("%.2f", rs.sublinear_exponent.value_or(-1)) + " sup q=" +
                   fmt("%.2f", rq.superlinear_order.value_or(-1));
    row.pass = ok;
    return row;
}

CriterionRow c14_determinism(const SuiteOptions& opts) {
    CriterionRow row{"14", "byte-identical trace CSVs for identical config+seed", "",
                     "identical bytes", "exact", false};
    const std::string root =
        opts.out_dir.empty() ? "kloptim_suite_out" : opts.out_dir;

    auto read_file = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    bool ok = true;
    for (const auto& [id, algo] :
         std::vector<std::pair<std::string, Algo>>{{"power4:d=6", Algo::cr},
                                                   {"bilinear:1d", Algo::prox_gda}}) {
        ExperimentConfig cfg;
        cfg.problem_id = id;
        cfg.algo = algo;
        cfg.seed = opts.seed;
        cfg.max_iters = 2000;
        cfg.output_dir = root + "/det_a";
        const auto a = run_experiment(cfg);
        cfg.output_dir = root + "/det_b";
        const auto b = run_experiment(cfg);
        ok = ok && read_file(a.trace_csv) == read_file(b.trace_csv) &&
             !read_file(a.trace_csv).empty();
    }
    row.observed = ok ? "CSV bytes identical (cr + prox-gda)" : "CSV bytes differ";
    row.pass = ok;
    return row;
}

}  // namespace

SuiteResult run_acceptance_suite(const SuiteOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteOptions o = opts;
    if (o.jobs == 0)
        o.jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());

    using Fn = CriterionRow (*)(const SuiteOptions&);
    struct Entry {
        const char* id;
        const char* tag;
        Fn fn;
    };
    const Entry entries[] = {
        {"1", "subsolver certificates", c1_subsolver},
        {"2", "dynamics inequalities", c2_dynamics},
        {"3", "superlinear quadratics", c3_superlinear_quads},
        {"4", "linear power3", c4_linear_power3},
        {"5", "sublinear powers", c5_sublinear_powers},
        {"6", "finite length", c6_finite_length},
        {"7", "error bound", c7_error_bound},
        {"8", "mu chain", c8_mu_chain},
        {"9", "saddle escape", c9_saddle_escape},
        {"10", "gda lyapunov", c10_lyapunov},
        {"11", "gda linear", c11_gda_linear},
        {"12", "theta estimator", c12_theta_estimator},
        {"13", "classifier self-test", c13_classifier_selftest},
        {"14", "determinism", c14_determinism},
    };

    std::vector<const Entry*> selected;
    for (const auto& e : entries) {
        if (!o.filter.empty() && std::string(e.id).find(o.filter) == std::string::npos &&
            std::string(e.tag).find(o.filter) == std::string::npos)
            continue;
        selected.push_back(&e);
    }

    SuiteResult result;
    result.rows.resize(selected.size());
    parallel_for(selected.size(), o.jobs, [&](std::size_t i) {
        try {
            result.rows[i] = selected[i]->fn(o);
        } catch (const std::exception& e) {
            result.rows[i] = {selected[i]->id, "criterion threw", e.what(), "no exception",
                              "", false};
        }
    });
    for (const auto& r : result.rows) result.all_pass = result.all_pass && r.pass;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string format_suite_table(const SuiteResult& result) {
    std::ostringstream out;
    out << "  # | verdict | observed                                        | criterion\n";
    out << "----+---------+-------------------------------------------------+----------\n";
    for (const auto& r : result.rows) {
        char line[512];
        std::snprintf(line, sizeof(line), "%3s | %-7s | %-47s | %s [expect %s, tol %s]\n",
                      r.id.c_str(), r.pass ? "PASS" : "FAIL", r.observed.c_str(),
                      r.description.c_str(), r.expected.c_str(), r.tolerance.c_str());
        out << line;
    }
    out << (result.all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << " ("
        << fmt("%.1f", result.wall_seconds) << " s)\n";
    return out.str();
}

}  // namespace kloptim
