#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kloptim/oracle.hpp"

namespace kloptim {

enum class RateClass { finite_step, superlinear, linear, sublinear };

std::string to_string(RateClass c);

// What a theorem predicts for a given KL exponent: the class plus the
// parameter the class comes with (order for superlinear, exponent p of
// C * k^-p for sublinear; linear and finite_step carry none).
struct RatePrediction {
    RateClass cls = RateClass::linear;
    std::optional<double> superlinear_order;
    std::optional<double> sublinear_exponent;
};

enum class RateFamily { cr_value, cr_variable, cr_distance, gda_value, gda_variable };

RatePrediction predict_rates(double theta, RateFamily family);

// Classification of an observed error sequence. Exactly the parameter
// matching cls is set; degenerate marks all-equal inputs (reported with the
// boundary ratio 1).
struct RateReport {
    RateClass cls = RateClass::linear;
    std::optional<double> linear_ratio;        // in (0,1)
    std::optional<double> sublinear_exponent;  // error ~ C k^-p
    std::optional<double> superlinear_order;   // > 1
    std::size_t burn_in = 0;
    double fit_residual = 0.0;  // RMSE of the chosen model on the log scale
    bool degenerate = false;
    std::optional<RatePrediction> predicted;
};

// Decision procedure: exact zero -> finite_step; otherwise fit
// log e vs k (linear), log e vs log k (sublinear), log(-log e) vs k
// (superlinear) past burn-in and above the 1e-13 noise floor, and pick the
// smallest log-scale MSE with a 5% preference for the linear model.
RateReport classify_rate(const std::vector<double>& errors, std::size_t burn_in);

// Default burn-in when the caller has no better idea.
std::size_t default_burn_in(std::size_t trace_length);

struct ThetaEstimate {
    double theta_hat = 0.5;  // clamped to (0, 1]
    double slope = 0.0;      // log-log fit of r vs ||grad||
    double stderr_slope = 0.0;
    std::size_t n_points = 0;
    bool degenerate = false;  // slope <= 1, theta pinned at the floor
};

// Least-squares slope of log r vs log ||grad f||; theta_hat = 1 - 1/slope.
ThetaEstimate estimate_theta(const std::vector<std::pair<double, double>>& pairs,
                             std::size_t burn_in);

struct ErrorBoundFit {
    double slope = 0.0;     // fitted exponent of dist vs residual
    double constant = 0.0;  // empirical C with dist <= C * r^theta
    std::size_t n_points = 0;
};

// Regresses log dist_Omega(x) vs log (f(x) - f*) over the sampled points.
// The bound dist <= (C^(1-theta)/theta) r^theta predicts slope >= theta.
ErrorBoundFit error_bound_check(const SmoothOracle& oracle, const std::vector<Vec>& points,
                                double value_window = 0.0);

// Median of log e_{k+1} / log e_k over the longest strictly decreasing run
// inside [1e-14, 1e-1]; needs at least 4 entries there.
double superlinear_order(const std::vector<double>& errors);

// Plain least squares y = a + b x; exposed because several monitors fit lines.
struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double rss = 0.0;
    std::size_t n = 0;
};

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

namespace ratecfg {
inline constexpr double kNoiseFloor = 1e-13;
inline constexpr double kLinearPreference = 1.05;
}  // namespace ratecfg

}  // namespace kloptim
