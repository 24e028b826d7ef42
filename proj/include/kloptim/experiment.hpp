#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "kloptim/ratelab.hpp"

namespace kloptim {

enum class Algo { cr, prox_gda };

struct ExperimentConfig {
    std::string problem_id;
    Algo algo = Algo::cr;

    std::optional<double> M;      // CR cubic parameter override
    std::optional<double> eta_x;  // GDA overrides; defaults from (L, mu)
    std::optional<double> eta_y;
    std::size_t max_iters = 10000;
    std::optional<double> grad_tol;  // CR
    std::optional<double> step_tol;  // GDA
    std::optional<std::size_t> burn_in;

    std::uint64_t seed = 1;
    std::string output_dir = ".";
    std::string name;  // file stem; derived from problem/algo when empty
    bool store_points = false;
    bool strict = false;
};

struct ResultBundle {
    std::string trace_csv;
    std::string points_csv;  // empty unless store_points
    std::string summary_json;
    bool monitors_ok = true;  // slack minima within tolerance
    nlohmann::json summary;
};

// Resolve the problem, run the solver, write the trace CSV and summary JSON
// (rate reports per tracked sequence, monitor verdicts, verdict table of
// observed vs theta-predicted classes, resolved config echo, wall time).
ResultBundle run_experiment(const ExperimentConfig& cfg);

// classify_rate with the default burn-in, falling back to smaller burn-ins
// when a short (superlinear) trace leaves too few usable points.
std::optional<RateReport> classify_with_fallback(const std::vector<double>& errors,
                                                 std::optional<std::size_t> burn_in);

// Strip entries that only encode "distance of the final iterate to itself".
std::vector<double> drop_trailing_zeros(std::vector<double> v);

}  // namespace kloptim
