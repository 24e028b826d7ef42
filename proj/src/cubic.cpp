#include "kloptim/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kloptim/errors.hpp"

namespace kloptim {

namespace debug {
bool check_secular_monotonicity = false;
}
namespace testing {
bool inject_subsolver_bug = false;
}

double model_value(const CubicModel& model, const Vec& s) {
    if (s.size() != model.g.size()) throw InputError("model_value: dimension mismatch");
    const double n = norm2(s);
    return dot(model.g, s) + 0.5 * model.H.quadratic_form(s) + model.M / 6.0 * n * n * n;
}

namespace {

constexpr double kHardCaseRel = 1e-12;   // min-eigenspace gradient threshold
constexpr double kClusterRel = 1e-10;    // eigenvalue clustering width

// ||s(lambda)|| in eigencoordinates, +inf when lambda does not dominate -lam_min
double step_norm_at(const Vec& eigs, const Vec& d, double lam) {
    double s = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const double denom = eigs[i] + lam;
        if (denom <= 0.0) {
            if (d[i] != 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double w = d[i] / denom;
        s += w * w;
        if (s > 1e300) return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(s);
}

// d/dlambda of ||s(lambda)||
double step_norm_deriv(const Vec& eigs, const Vec& d, double lam, double nrm) {
    if (nrm == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const double denom = eigs[i] + lam;
        if (denom <= 0.0) continue;
        const double w = d[i] / denom;
        s += w * w / denom;
    }
    return -s / nrm;
}

void assert_secular_monotone(const Vec& eigs, const Vec& d, double lo, double hi) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        const double lam = lo + (hi - lo) * (i + 1) / 21.0;
        const double n = step_norm_at(eigs, d, lam);
        if (!(n < prev) && n > 0.0)
            throw NumericalError("solve_cubic: secular function not strictly decreasing");
        prev = n;
    }
}

}  // namespace

CubicSolution solve_cubic(const CubicModel& model, double tol) {
    return solve_cubic(model, sym_eig(model.H), tol);
}

CubicSolution solve_cubic(const CubicModel& model, const EigenDecomposition& ed,
                          double tol) {
    const std::size_t n = model.g.size();
    if (model.H.dim() != n) throw InputError("solve_cubic: dimension mismatch");
    if (!(model.M > 0.0)) throw InputError("solve_cubic: M must be positive");
    if (!all_finite(model.g) || !model.H.finite() || !std::isfinite(model.M))
        throw InputError("solve_cubic: non-finite model");
    if (tol < 1e-14 || tol > 1e-6) throw InputError("solve_cubic: tol out of [1e-14, 1e-6]");

    const double M = model.M;
    const Vec& eigs = ed.eigenvalues;
    const double lam_min = eigs.front();
    const Vec d = ed.to_eigen_basis(model.g);
    const double gnorm = norm2(model.g);

    CubicSolution sol;
    sol.step.assign(n, 0.0);

    auto finish = [&](Vec w, double lam, bool hard) {
        sol.step = ed.from_eigen_basis(w);
        if (testing::inject_subsolver_bug && n > 0) sol.step[0] += 0.1;
        sol.lam = lam;
        sol.hard_case = hard;
        Vec r = model.H.multiply(sol.step);
        axpy(r, lam, sol.step);
        for (std::size_t i = 0; i < n; ++i) r[i] += model.g[i];
        sol.stationarity_residual = norm2(r);
        sol.secular_residual = std::fabs(lam - 0.5 * M * norm2(sol.step));
        sol.model_decrease = std::min(model_value(model, sol.step), 0.0);
        return sol;
    };

    // already optimal: zero gradient and psd Hessian
    if (gnorm == 0.0 && lam_min >= 0.0) return finish(Vec(n, 0.0), 0.0, false);

    // min-eigenspace cluster and the hard-case test
    const double cluster_tol = kClusterRel * (1.0 + std::fabs(lam_min));
    std::size_t cluster_end = 0;
    while (cluster_end < n && eigs[cluster_end] <= lam_min + cluster_tol) ++cluster_end;
    double d_cluster = 0.0;
    for (std::size_t i = 0; i < cluster_end; ++i) d_cluster += d[i] * d[i];
    d_cluster = std::sqrt(d_cluster);

    const double lam_lo = std::max(0.0, -lam_min);

    if (lam_min < 0.0 && d_cluster <= kHardCaseRel * gnorm) {
        // limit of (M/2)||s_perp(lambda)|| as lambda -> -lam_min
        Vec w(n, 0.0);
        double n_perp2 = 0.0;
        for (std::size_t i = cluster_end; i < n; ++i) {
            w[i] = -d[i] / (eigs[i] + lam_lo);
            n_perp2 += w[i] * w[i];
        }
        const double n_perp = std::sqrt(n_perp2);
        if (0.5 * M * n_perp < lam_lo) {
            // hard case: pad the step inside the min eigenspace
            const double target = 2.0 * lam_lo / M;  // required ||s||
            const double tau2 = target * target - n_perp2;
            double tau = std::sqrt(std::max(0.0, tau2));
            // sign: first significant coordinate of the added component positive
            const Vec v = ed.eigenvector(0);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::fabs(v[i]) > 1e-12) {
                    if (v[i] < 0.0) tau = -tau;
                    break;
                }
            }
            w[0] = tau;  // eigencoordinate of the first cluster vector
            return finish(std::move(w), lam_lo, true);
        }
    }

    // interior secular root: psi(lam) = (M/2)||s(lam)|| - lam on (lam_lo, inf)
    auto psi = [&](double lam) { return 0.5 * M * step_norm_at(eigs, d, lam) - lam; };

    // bracket by doubling
    double hi = std::max({1.0, 2.0 * lam_lo, 0.5 * M * std::sqrt(gnorm)});
    int doublings = 0;
    while (psi(hi) >= 0.0) {
        hi *= 2.0;
        if (++doublings > 400) throw NumericalError("solve_cubic: bracket search diverged");
    }
    double lo = lam_lo;  // open endpoint, psi -> +inf (or psi(0) >= 0)

    if (debug::check_secular_monotonicity) assert_secular_monotone(eigs, d, lo, hi);

    // safeguarded Newton with bisection fallback
    double lam = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double nrm = step_norm_at(eigs, d, lam);
        const double val = 0.5 * M * nrm - lam;
        if (std::fabs(val) <= 0.5 * tol * (1.0 + lam)) break;
        if (val > 0.0)
            lo = lam;
        else
            hi = lam;
        const double deriv = 0.5 * M * step_norm_deriv(eigs, d, lam, nrm) - 1.0;
        double next = lam - val / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + lam)) break;
        lam = next;
    }

    Vec w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double denom = eigs[i] + lam;
        w[i] = denom > 0.0 ? -d[i] / denom : 0.0;
    }
    return finish(std::move(w), lam, false);
}

OptimalityCertificate verify_global_optimality(const CubicModel& model,
                                               const CubicSolution& sol, double tol) {
    const std::size_t n = model.g.size();
    if (sol.step.size() != n) throw InputError("verify_global_optimality: dimension mismatch");

    OptimalityCertificate cert;
    Vec r = model.H.multiply(sol.step);
    axpy(r, sol.lam, sol.step);
    for (std::size_t i = 0; i < n; ++i) r[i] += model.g[i];
    cert.stationarity_residual = norm2(r);
    cert.secular_residual = std::fabs(sol.lam - 0.5 * model.M * norm2(sol.step));

    SymMatrix shifted = model.H;
    shifted.add_to_diagonal(sol.lam);
    cert.psd_margin = min_eigenvalue(shifted);

    cert.pass = sol.lam >= -tol &&
                cert.stationarity_residual <= tol * (1.0 + norm2(model.g)) &&
                cert.secular_residual <= tol * (1.0 + sol.lam) &&
                cert.psd_margin >= -tol;
    return cert;
}

}  // namespace kloptim
