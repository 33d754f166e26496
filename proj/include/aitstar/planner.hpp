#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "aitstar/forward_queue.hpp"
#include "aitstar/graph.hpp"
#include "aitstar/reverse_search.hpp"
#include "aitstar/scenarios.hpp"
#include "aitstar/space.hpp"

namespace aitstar {

enum class HeuristicMode {
    kAdaptive,         // reverse-search cost-to-go
    kStaticEuclidean,  // a-priori Euclidean cost-to-go
};

struct PlannerConfig {
    std::size_t batch_size = 100;
    double eta = 1.001;
    double resolution = 1e-6;  // collision resolution, fraction of max extent
    HeuristicMode mode = HeuristicMode::kAdaptive;
    bool pruning = true;
    std::uint64_t seed = 1;
};

struct Counters {
    std::uint64_t num_samples = 0;
    std::uint64_t num_motion_checks = 0;
    std::uint64_t num_interpolated_states = 0;
    std::uint64_t num_queue_pops = 0;
    std::uint64_t num_reverse_expansions = 0;
    std::uint64_t num_batches = 0;
    std::uint64_t num_iterations = 0;
};

struct Solution {
    std::vector<State> path;
    double cost = kInf;
    double time_s = 0.0;
    Counters counters;
};

struct TraceEvent {
    double time_s = 0.0;
    std::uint64_t logical = 0;  // cumulative interpolated states when recorded
    double cost = kInf;
    Counters counters;
};

struct StopCondition {
    std::optional<double> wall_s;
    std::optional<std::uint64_t> iterations;
    std::optional<std::uint64_t> logical;  // interpolated-state budget
    bool first_solution = false;
};

struct SolveResult {
    std::optional<Solution> best;
    std::vector<TraceEvent> events;
    Counters counters;
};

// Anytime batchwise planner over an edge-implicit RGG: lazy forward edge
// search ordered by the adaptive (or a-priori) heuristic, with batch
// management, pruning, and solution tracking. One instance per logical
// thread.
class Planner {
  public:
    enum class Event { kNone, kEdgeProcessed, kSolutionImproved, kBatchAdded };

    Planner(const ProblemInstance& problem, ValidityOracle& oracle, PlannerConfig config);

    Event iterate();
    SolveResult solve(const StopCondition& stop);

    double current_cost() const { return c_current_; }
    std::optional<Solution> best_solution() const;
    Counters counters() const;
    bool converged() const { return converged_; }

    const Graph& graph() const { return graph_; }
    const ReverseSearch& reverse_search() const { return reverse_; }
    const PlannerConfig& config() const { return config_; }
    const ProblemInstance& problem() const { return *problem_; }

  private:
    ForwardKey edge_key(StateId parent, StateId child) const;
    double heuristic(StateId id) const;
    void push_expand(StateId x);
    Event add_batch();
    bool update_solution();
    void continue_reverse_search();

    const ProblemInstance* problem_;
    ValidityOracle* oracle_;
    PlannerConfig config_;
    Graph graph_;
    ReverseSearch reverse_;
    ForwardQueue queue_;
    UnprocessedTally tally_;
    InformedSampler sampler_;
    double c_current_ = kInf;
    bool converged_ = false;
    Counters counters_;
    std::vector<StateId> scratch_changed_;
};

}  // namespace aitstar
