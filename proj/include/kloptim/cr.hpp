#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kloptim/linalg.hpp"
#include "kloptim/oracle.hpp"

namespace kloptim {

struct CRConfig {
    double M = 1.0;  // cubic parameter; monitors assume M >= L2 of the oracle
    std::size_t max_iters = 10000;
    double grad_tol = 1e-10;
    double neg_eig_tol = 1e-8;
    double subsolver_tol = 1e-12;
    bool store_points = false;
};

enum class CRTermination { grad_and_eig_tol, max_iters, stagnation };

struct CRTraceRecord {
    std::size_t k = 0;
    double f = 0.0;
    double grad_norm = 0.0;
    double min_eig = 0.0;                  // lambda_min of the Hessian at x_k
    std::optional<double> step_norm;       // ||x_{k+1} - x_k||, absent on the last record
    double mu_gap = 0.0;                   // stationarity gap at x_k
    double dist = 0.0;                     // solution-set distance at x_k
    double r = 0.0;                        // f(x_k) - f*
};

struct CRTrace {
    std::vector<CRTraceRecord> records;
    CRTermination terminated_by = CRTermination::max_iters;
    std::string oracle_id;
    CRConfig config;
    double hess_lipschitz = 0.0;  // L2 the monitors were evaluated with

    Vec x_final;
    std::vector<double> dist_to_final;  // ||x_k - x_final||, filled post hoc
    std::vector<Vec> points;            // only kept when config.store_points

    std::vector<double> column_r() const;
    std::vector<double> column_dist() const;
    std::vector<double> column_mu_gap() const;
    std::vector<double> column_grad_norm() const;
};

// One cubic-regularized Newton run. Steps are global minimizers of the local
// cubic model; stops on (grad_tol, neg_eig_tol), max_iters, or two consecutive
// steps below 1e-15 (stagnation). Throws ConfigurationError if an iterate
// leaves the oracle's certified ball.
CRTrace run_cr(const SmoothOracle& oracle, const Vec& x0, const CRConfig& config);

// Slacks (RHS - LHS) of the three per-iteration inequalities the analysis
// leans on, for the transition k -> k+1:
//   ||grad f(x_{k+1})||            <= (L+M)/2  * ||x_{k+1}-x_k||^2
//   f(x_{k+1})                     <= f(x_k) - M/12 * ||x_{k+1}-x_k||^3
//   -lambda_min(hess f(x_{k+1}))   <= (2L+M)/2 * ||x_{k+1}-x_k||
// L here is the Hessian Lipschitz constant; all slacks are nonnegative
// (to 1e-9 relative) whenever M >= L.
struct DynamicsSlacks {
    std::size_t k = 0;
    double grad_slack = 0.0;
    double decrease_slack = 0.0;
    double eig_slack = 0.0;
};

std::vector<DynamicsSlacks> dynamics_check(const CRTrace& trace, double hess_lipschitz,
                                           double M);

// mu(x) = max( sqrt(2||grad f(x)|| / (L+M)), 2/(2L+M) * max(0, -lambda_min) ).
// Zero exactly at second-order stationary points. Along a CR run with
// M >= L2, mu at the iterate produced by step k is bounded by that step:
// mu(x_{k+1}) <= ||x_{k+1} - x_k||.
double stationarity_gap(const SmoothOracle& oracle, const Vec& x, double hess_lipschitz,
                        double M);

// Same formula from already-computed scalars (used by the trace writer).
double stationarity_gap_from(double grad_norm, double min_eig, double hess_lipschitz,
                             double M);

// Tail lengths Delta_k = sum_{i>=k} ||x_{i+1} - x_i||; Delta_last = 0 and
// Delta_k = step_norm(k) + Delta_{k+1} exactly.
std::vector<double> tail_lengths(const CRTrace& trace);

// Chain of the two dynamics bounds: mu at the iterate produced by step k
// stays below the step, mu(x_{k+1}) <= ||x_{k+1} - x_k||. A transition is
// only checkable in doubles while the implied gradient bound (L+M)/2 s^2
// sits above the round-off floor of the gradient evaluation; below that the
// comparison measures noise, and the transition is counted as skipped.
struct MuChainReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;
    double min_slack = 0.0;  // min over checked k of step_norm(k) - mu_gap(k+1)
};

MuChainReport mu_chain_check(const CRTrace& trace);

}  // namespace kloptim
