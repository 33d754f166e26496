#pragma once

#include <cstdint>

#include "aitstar/planner.hpp"
#include "aitstar/scenarios.hpp"
#include "aitstar/space.hpp"

namespace aitstar {

struct RrtConfig {
    double goal_bias = 0.05;
    double max_edge_length = 0.0;  // 0: dimension-dependent default
    double eta = 1.001;            // rewire radius factor (RRT*)
    std::uint64_t seed = 1;
};

// Benchmark parameterization: 0.5 in R^4, 1.25 in R^8, 3.0 in R^16,
// interpolated in between and scaled beyond.
double default_max_edge_length(std::size_t n);

// Feasibility planner; returns at the first solution.
SolveResult rrt_solve(const ProblemInstance& problem, ValidityOracle& oracle,
                      const RrtConfig& config, const StopCondition& stop);

// Anytime asymptotically optimal variant with shrinking rewire radius
// min(r(q), max edge length), r(q) over the measure of the full space.
SolveResult rrt_star_solve(const ProblemInstance& problem, ValidityOracle& oracle,
                           const RrtConfig& config, const StopCondition& stop);

// Bidirectional extend/connect search; returns at the first solution.
SolveResult rrt_connect_solve(const ProblemInstance& problem, ValidityOracle& oracle,
                              const RrtConfig& config, const StopCondition& stop);

}  // namespace aitstar
