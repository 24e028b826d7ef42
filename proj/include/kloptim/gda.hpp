#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kloptim/minimax.hpp"

namespace kloptim {

struct GDAConfig {
    double eta_x = 0.0;
    double eta_y = 0.0;
    std::size_t max_iters = 100000;
    double step_tol = 1e-10;
    bool store_points = false;
};

// (eta_x, eta_y) = ( 1/(kappa^3 (L+3)^2), 1/L ). The Lyapunov decrease is
// guaranteed at or below these.
std::pair<double, double> default_learning_rates(double L, double mu);

enum class GDATermination { step_tol, max_iters };

struct GDATraceRecord {
    std::size_t t = 0;
    double lyapunov = 0.0;              // H(z_t)
    double phi_plus_g = 0.0;            // (Phi + g)(x_t)
    std::optional<double> x_step_norm;  // ||x_{t+1} - x_t||, absent on last record
    std::optional<double> y_step_norm;
    double y_gap = 0.0;                 // ||y_t - y*(x_t)||
    double dist_x = 0.0;                // ||x_t - x_final||, filled post hoc
    std::optional<double> y_cross_gap;  // ||y_{t+1} - y*(x_t)||, for the contraction check
};

struct GDATrace {
    std::vector<GDATraceRecord> records;
    GDATermination terminated_by = GDATermination::max_iters;
    std::string oracle_id;
    GDAConfig config;
    double ystar_tol = 0.0;  // 0 = exact y* oracle, else inner-maximizer tolerance

    Vec x_final, y_final;
    std::vector<double> dist_y;           // ||y_t - y_final||, filled post hoc
    std::vector<Vec> points_x, points_y;  // only kept when config.store_points

    std::vector<double> column_lyapunov() const;
    std::vector<double> column_dist_x() const;
};

// Alternating proximal descent in x / proximal ascent in y. Stops at
// max_iters or when both step norms stay <= step_tol for 3 consecutive
// iterations. Throws ConfigurationError if y*(x_t) reaches the boundary of Y
// (the zoo's closed-form oracles stop being valid there).
GDATrace run_prox_gda(const MinimaxOracle& oracle, const Vec& x0, const Vec& y0,
                      const GDAConfig& config);

// H(z) = Phi(x) + g(x) + (1 - 1/(4 kappa^2)) ||y - y*(x)||^2
double lyapunov(const MinimaxOracle& oracle, const Vec& x, const Vec& y);

// slack_t = H_t - H_{t+1} - 2||x_{t+1}-x_t||^2
//           - 1/(4 kappa^2) (||y_{t+1}-y*(x_{t+1})||^2 + ||y_t-y*(x_t)||^2),
// nonnegative (to 1e-12 relative) at compliant learning rates.
std::vector<double> lyapunov_decrease_check(const GDATrace& trace,
                                            const MinimaxOracle& oracle,
                                            const GDAConfig& config);

// ratio_t = ||y_{t+1}-y*(x_t)||^2 / ||y_t-y*(x_t)||^2, expected <= 1 - 1/kappa
// with eta_y = 1/L. Entries with a vanishing denominator are skipped (nullopt).
std::vector<std::optional<double>> ystar_contraction_check(const MinimaxOracle& oracle,
                                                           const GDATrace& trace,
                                                           double eta_y);

}  // namespace kloptim
