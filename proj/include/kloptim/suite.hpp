#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kloptim {

struct CriterionRow {
    std::string id;
    std::string description;
    std::string observed;
    std::string expected;
    std::string tolerance;
    bool pass = false;
};

struct SuiteOptions {
    std::size_t jobs = 0;       // 0 = hardware concurrency
    std::string filter;         // substring filter over criterion ids/descriptions
    std::string out_dir;        // scratch space (determinism criterion writes files)
    std::uint64_t seed = 20240401;
};

struct SuiteResult {
    std::vector<CriterionRow> rows;
    bool all_pass = true;
    double wall_seconds = 0.0;
};

// The acceptance matrix: every criterion at its pinned tolerance, one row per
// criterion. Rows keep their order regardless of how many workers run them.
SuiteResult run_acceptance_suite(const SuiteOptions& opts);

// Render as an aligned text table.
std::string format_suite_table(const SuiteResult& result);

}  // namespace kloptim
