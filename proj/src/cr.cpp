#include "kloptim/cr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kloptim/cubic.hpp"
#include "kloptim/errors.hpp"

namespace kloptim {

std::vector<double> CRTrace::column_r() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& rec : records) v.push_back(rec.r);
    return v;
}

std::vector<double> CRTrace::column_dist() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& rec : records) v.push_back(rec.dist);
    return v;
}

std::vector<double> CRTrace::column_mu_gap() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& rec : records) v.push_back(rec.mu_gap);
    return v;
}

std::vector<double> CRTrace::column_grad_norm() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& rec : records) v.push_back(rec.grad_norm);
    return v;
}

double stationarity_gap_from(double grad_norm, double min_eig, double hess_lipschitz,
                             double M) {
    const double grad_part = std::sqrt(2.0 * grad_norm / (hess_lipschitz + M));
    const double eig_part = 2.0 / (2.0 * hess_lipschitz + M) * std::max(0.0, -min_eig);
    return std::max(grad_part, eig_part);
}

double stationarity_gap(const SmoothOracle& oracle, const Vec& x, double hess_lipschitz,
                        double M) {
    const double gn = norm2(oracle.gradient(x));
    const double me = min_eigenvalue(oracle.hessian(x));
    return stationarity_gap_from(gn, me, hess_lipschitz, M);
}

CRTrace run_cr(const SmoothOracle& oracle, const Vec& x0, const CRConfig& config) {
    if (x0.size() != oracle.dim) throw InputError("run_cr: x0 has wrong dimension");
    if (!(config.M > 0.0)) throw InputError("run_cr: M must be positive");
    if (config.max_iters == 0 || config.max_iters > 1000000)
        throw InputError("run_cr: max_iters out of range");
    if (norm2(x0) > oracle.valid_radius * (1.0 + 1e-12))
        throw ConfigurationError("run_cr: x0 outside the oracle's certified ball");

    CRTrace trace;
    trace.oracle_id = oracle.id;
    trace.config = config;
    trace.hess_lipschitz = oracle.lipschitz_hess;

    std::vector<Vec> pts;
    Vec x = x0;
    int consecutive_tiny = 0;

    for (std::size_t k = 0;; ++k) {
        const double f = oracle.value(x);
        const Vec g = oracle.gradient(x);
        const SymMatrix H = oracle.hessian(x);
        if (!std::isfinite(f) || !all_finite(g) || !H.finite())
            throw NumericalError("run_cr: non-finite oracle evaluation at iteration " +
                                 std::to_string(k));
        const auto ed = sym_eig(H);

        CRTraceRecord rec;
        rec.k = k;
        rec.f = f;
        rec.grad_norm = norm2(g);
        rec.min_eig = ed.eigenvalues.front();
        rec.mu_gap = stationarity_gap_from(rec.grad_norm, rec.min_eig,
                                           oracle.lipschitz_hess, config.M);
        rec.dist = oracle.solution_distance ? oracle.solution_distance(x) : 0.0;
        rec.r = f - oracle.f_star;
        trace.records.push_back(rec);
        pts.push_back(x);

        if (rec.grad_norm <= config.grad_tol && rec.min_eig >= -config.neg_eig_tol) {
            trace.terminated_by = CRTermination::grad_and_eig_tol;
            break;
        }
        if (k == config.max_iters) {
            trace.terminated_by = CRTermination::max_iters;
            break;
        }
        if (consecutive_tiny >= 2) {
            trace.terminated_by = CRTermination::stagnation;
            break;
        }

        const CubicSolution sol = solve_cubic({g, H, config.M}, ed, config.subsolver_tol);
        const double step = norm2(sol.step);
        trace.records.back().step_norm = step;
        consecutive_tiny = step <= 1e-15 ? consecutive_tiny + 1 : 0;

        Vec x_next = add(x, sol.step);
        if (norm2(x_next) > oracle.valid_radius * (1.0 + 1e-12))
            throw ConfigurationError(
                "run_cr: iterate left the ball where L and L2 are certified (radius " +
                std::to_string(oracle.valid_radius) + ")");
        x = std::move(x_next);
    }

    trace.x_final = x;
    trace.dist_to_final.reserve(pts.size());
    for (const auto& p : pts) trace.dist_to_final.push_back(dist2(p, x));
    if (config.store_points) trace.points = std::move(pts);
    return trace;
}

std::vector<DynamicsSlacks> dynamics_check(const CRTrace& trace, double hess_lipschitz,
                                           double M) {
    const double L = hess_lipschitz;
    std::vector<DynamicsSlacks> out;
    if (trace.records.size() < 2) return out;
    out.reserve(trace.records.size() - 1);
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const auto& cur = trace.records[k];
        const auto& nxt = trace.records[k + 1];
        if (!cur.step_norm) continue;
        const double s = *cur.step_norm;
        DynamicsSlacks sl;
        sl.k = k;
        sl.grad_slack = 0.5 * (L + M) * s * s - nxt.grad_norm;
        sl.decrease_slack = cur.f - M / 12.0 * s * s * s - nxt.f;
        sl.eig_slack = 0.5 * (2.0 * L + M) * s + nxt.min_eig;
        out.push_back(sl);
    }
    return out;
}

MuChainReport mu_chain_check(const CRTrace& trace) {
    MuChainReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    const double L = trace.hess_lipschitz;
    const double M = trace.config.M;
    for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
        const auto& cur = trace.records[k];
        const auto& nxt = trace.records[k + 1];
        if (!cur.step_norm) continue;
        const double s = *cur.step_norm;
        const double grad_floor = 1e-13 * (1.0 + std::fabs(nxt.f));
        if (0.5 * (L + M) * s * s <= grad_floor) {
            ++rep.skipped;
            continue;
        }
        ++rep.checked;
        rep.min_slack = std::min(rep.min_slack, s - nxt.mu_gap);
    }
    if (rep.checked == 0) rep.min_slack = 0.0;
    return rep;
}

std::vector<double> tail_lengths(const CRTrace& trace) {
    const std::size_t n = trace.records.size();
    std::vector<double> delta(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        const double step = trace.records[i].step_norm.value_or(0.0);
        delta[i] = i + 1 < n ? step + delta[i + 1] : step;
    }
    return delta;
}

}  // namespace kloptim
