#include "kloptim/gda.hpp"

#include <algorithm>
#include <cmath>

#include "kloptim/errors.hpp"

namespace kloptim {

std::vector<double> GDATrace::column_lyapunov() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& rec : records) v.push_back(rec.lyapunov);
    return v;
}

std::vector<double> GDATrace::column_dist_x() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& rec : records) v.push_back(rec.dist_x);
    return v;
}

std::pair<double, double> default_learning_rates(double L, double mu) {
    if (!(mu > 0.0)) throw InputError("default_learning_rates: mu must be positive");
    if (L < mu) throw InputError("default_learning_rates: L < mu (kappa < 1 impossible)");
    const double kappa = L / mu;
    return {1.0 / (kappa * kappa * kappa * (L + 3.0) * (L + 3.0)), 1.0 / L};
}

double lyapunov(const MinimaxOracle& oracle, const Vec& x, const Vec& y) {
    const Vec ys = oracle.y_star ? oracle.y_star(x) : oracle.y_star_fallback(x, 1e-12);
    const double gap = dist2(y, ys);
    const double k2 = oracle.kappa * oracle.kappa;
    return oracle.phi_plus_g(x) + (1.0 - 1.0 / (4.0 * k2)) * gap * gap;
}

GDATrace run_prox_gda(const MinimaxOracle& oracle, const Vec& x0, const Vec& y0,
                      const GDAConfig& config) {
    if (x0.size() != oracle.dim_x || y0.size() != oracle.dim_y)
        throw InputError("run_prox_gda: start point has wrong dimensions");
    if (!(config.eta_x > 0.0) || !(config.eta_y > 0.0))
        throw InputError("run_prox_gda: learning rates must be positive");

    GDATrace trace;
    trace.oracle_id = oracle.id;
    trace.config = config;
    trace.ystar_tol = oracle.y_star ? 0.0 : 1e-12;

    auto ystar_at = [&](const Vec& x) {
        return oracle.y_star ? oracle.y_star(x) : oracle.y_star_fallback(x, 1e-12);
    };

    Vec x = x0;
    // bring y0 into Y
    Vec y = oracle.y_radius > 0.0 ? apply_prox(ProxOperator::ball(oracle.y_radius), y0, 1.0)
                                  : y0;
    const double k2 = oracle.kappa * oracle.kappa;

    std::vector<Vec> px, py;
    int consecutive_small = 0;

    for (std::size_t t = 0;; ++t) {
        const Vec ys = ystar_at(x);
        if (oracle.y_radius > 0.0 && norm2(ys) >= oracle.y_radius * (1.0 - 1e-12))
            throw ConfigurationError(
                "run_prox_gda: y*(x_t) reached the boundary of Y; enlarge y_radius");

        GDATraceRecord rec;
        rec.t = t;
        rec.phi_plus_g = oracle.phi_plus_g(x);
        rec.y_gap = dist2(y, ys);
        rec.lyapunov = rec.phi_plus_g + (1.0 - 1.0 / (4.0 * k2)) * rec.y_gap * rec.y_gap;
        trace.records.push_back(rec);
        px.push_back(x);
        py.push_back(y);

        if (consecutive_small >= 3) {
            trace.terminated_by = GDATermination::step_tol;
            break;
        }
        if (t == config.max_iters) {
            trace.terminated_by = GDATermination::max_iters;
            break;
        }

        Vec wx = x;
        axpy(wx, -config.eta_x, oracle.grad_x(x, y));
        Vec x_next = apply_prox(oracle.prox_g, wx, config.eta_x);

        Vec wy = y;
        axpy(wy, config.eta_y, oracle.grad_y(x, y));
        Vec y_next = apply_prox(oracle.prox_h, wy, config.eta_y);

        auto& back = trace.records.back();
        back.x_step_norm = dist2(x_next, x);
        back.y_step_norm = dist2(y_next, y);
        back.y_cross_gap = dist2(y_next, ys);

        consecutive_small =
            (*back.x_step_norm <= config.step_tol && *back.y_step_norm <= config.step_tol)
                ? consecutive_small + 1
                : 0;

        x = std::move(x_next);
        y = std::move(y_next);
    }

    trace.x_final = x;
    trace.y_final = y;
    trace.dist_y.reserve(trace.records.size());
    for (std::size_t t = 0; t < trace.records.size(); ++t) {
        trace.records[t].dist_x = dist2(px[t], x);
        trace.dist_y.push_back(dist2(py[t], y));
    }
    if (config.store_points) {
        trace.points_x = std::move(px);
        trace.points_y = std::move(py);
    }
    return trace;
}

std::vector<double> lyapunov_decrease_check(const GDATrace& trace,
                                            const MinimaxOracle& oracle,
                                            const GDAConfig&) {
    const double k2 = oracle.kappa * oracle.kappa;
    std::vector<double> slacks;
    if (trace.records.size() < 2) return slacks;
    slacks.reserve(trace.records.size() - 1);
    for (std::size_t t = 0; t + 1 < trace.records.size(); ++t) {
        const auto& cur = trace.records[t];
        const auto& nxt = trace.records[t + 1];
        if (!cur.x_step_norm) continue;
        const double xs = *cur.x_step_norm;
        slacks.push_back(cur.lyapunov - nxt.lyapunov - 2.0 * xs * xs -
                         1.0 / (4.0 * k2) * (nxt.y_gap * nxt.y_gap + cur.y_gap * cur.y_gap));
    }
    return slacks;
}

std::vector<std::optional<double>> ystar_contraction_check(const MinimaxOracle& oracle,
                                                           const GDATrace& trace,
                                                           double eta_y) {
    if (eta_y > 1.0 / oracle.L * (1.0 + 1e-12))
        throw InputError("ystar_contraction_check: eta_y must be <= 1/L");
    std::vector<std::optional<double>> ratios;
    for (const auto& rec : trace.records) {
        if (!rec.y_cross_gap) continue;
        const double denom = rec.y_gap * rec.y_gap;
        if (denom < 1e-24) {
            ratios.push_back(std::nullopt);
            continue;
        }
        ratios.push_back(*rec.y_cross_gap * *rec.y_cross_gap / denom);
    }
    return ratios;
}

}  // namespace kloptim
