#pragma once

#include "kloptim/linalg.hpp"

namespace kloptim {

// min_s  <g,s> + 1/2 s^T H s + (M/6)||s||^3
struct CubicModel {
    Vec g;
    SymMatrix H;
    double M = 1.0;
};

// Globally optimal step with its certificate pieces. Optimality holds iff
//   (H + lam I) s = -g,   lam = (M/2)||s||,   H + lam I psd,   lam >= 0.
struct CubicSolution {
    Vec step;
    double lam = 0.0;
    double model_decrease = 0.0;
    bool hard_case = false;
    double stationarity_residual = 0.0;  // ||(H + lam I)s + g||
    double secular_residual = 0.0;       // |lam - (M/2)||s|||
};

struct OptimalityCertificate {
    double stationarity_residual = 0.0;
    double secular_residual = 0.0;
    double psd_margin = 0.0;  // min eigenvalue of H + lam I
    bool pass = false;
};

double model_value(const CubicModel& model, const Vec& s);

CubicSolution solve_cubic(const CubicModel& model, double tol);

// Variant reusing an eigendecomposition of model.H (the CR loop already has one).
CubicSolution solve_cubic(const CubicModel& model, const EigenDecomposition& ed,
                          double tol);

OptimalityCertificate verify_global_optimality(const CubicModel& model,
                                               const CubicSolution& sol, double tol);

namespace debug {
// When set, every secular solve samples 20 bracket points and asserts
// ||s(lambda)|| is strictly decreasing.
extern bool check_secular_monotonicity;
}  // namespace debug

namespace testing {
// Fault injection for suite self-tests: perturbs the solved step so that
// certificates must fail.
extern bool inject_subsolver_bug;
}  // namespace testing

}  // namespace kloptim
