#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kloptim/minimax.hpp"
#include "kloptim/oracle.hpp"

namespace kloptim {

// A zoo problem resolved from its string id, together with the seeded start
// point(s) and the default cubic parameter for CR runs.
struct Problem {
    std::string id;  // canonical id with all parameters materialized
    std::optional<SmoothOracle> smooth;
    std::optional<MinimaxOracle> minimax;
    Vec x0;
    Vec y0;               // minimax problems only
    double default_M = 1.0;  // 2*L2, or 1 when L2 = 0
};

// Grammar:  family[:key=value[,key=value...]]
//
//   power2 | power3 | power4 | power6   d=<int>  scale=<real>  x0=<start norm>
//   quad       d=<int>  cond=<real>  x0=<start norm>
//   saddle     d=<int>  gamma=<real>  x0=<start norm>        (alias saddle:2d)
//   bilinear   dx=<int> dy=<int> mu=<real> ridge=<real> yr=<real>
//              a=unit|random|zero  g=none|l1:<w>|sql2:<w>  x0=<start norm>
//              (aliases bilinear:1d, bilinear:decoupled)
//
// Random pieces (orthogonal bases, A entries, start directions) are drawn
// from the given seed; everything else is deterministic.
Problem resolve_problem(const std::string& id, std::uint64_t seed);

// (pattern, description) pairs for the `list` subcommand.
std::vector<std::pair<std::string, std::string>> zoo_catalog();

}  // namespace kloptim
