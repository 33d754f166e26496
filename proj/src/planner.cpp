#include "aitstar/planner.hpp"

#include <algorithm>
#include <cmath>

namespace aitstar {

Planner::Planner(const ProblemInstance& problem, ValidityOracle& oracle, PlannerConfig config)
    : problem_(&problem),
      oracle_(&oracle),
      config_(config),
      graph_(problem),
      sampler_(problem, config.seed) {
    queue_.set_tally(&tally_);
    if (config_.mode == HeuristicMode::kAdaptive) {
        reverse_.set_tally(&tally_);
        reverse_.set_label_drop_hook([this](StateId id) {
            queue_.refresh_child(id, [this](StateId p, StateId c) { return edge_key(p, c); });
        });
    }

    const std::size_t q = graph_.num_samples();
    graph_.set_radius(rgg_radius(problem.space.dimension(), std::max<std::size_t>(q, 2),
                                 informed_measure(problem, kInf), config_.eta));
    graph_.rebuild_index();
    push_expand(graph_.start_id());
    if (config_.mode == HeuristicMode::kAdaptive) {
        reverse_.restart(graph_);
        continue_reverse_search();
    }
    queue_.rekey_all([this](StateId p, StateId c) { return edge_key(p, c); });
}

double Planner::heuristic(StateId id) const {
    if (config_.mode == HeuristicMode::kAdaptive) {
        return reverse_.h_con(id);
    }
    return graph_.h_hat_apriori(id);
}

ForwardKey Planner::edge_key(StateId parent, StateId child) const {
    const double g = graph_.g(parent);
    const double c = graph_.distance(parent, child);
    return ForwardKey{g + c + heuristic(child), g + c, g};
}

void Planner::push_expand(StateId x) {
    for (const DirectedEdge& edge : graph_.expand(x)) {
        if (edge.child == graph_.start_id()) {
            continue;  // edges into the start are never useful
        }
        queue_.push(edge.parent, edge.child, edge_key(edge.parent, edge.child));
    }
}

void Planner::continue_reverse_search() {
    reverse_.run(graph_, [this] { return tally_.any_unprocessed(); });
}

bool Planner::update_solution() {
    double best = kInf;
    for (const StateId goal : graph_.goal_ids()) {
        best = std::min(best, graph_.g(goal));
    }
    if (best < c_current_) {
        c_current_ = best;
        return true;
    }
    return false;
}

Planner::Event Planner::add_batch() {
    if (converged_) {
        return Event::kNone;
    }
    if (config_.pruning && std::isfinite(c_current_)) {
        const std::vector<StateId> removed = graph_.prune(c_current_);
        reverse_.on_states_removed(graph_, removed);
    }
    std::vector<State> samples;
    try {
        samples = sampler_.sample(config_.batch_size, c_current_);
    } catch (const DegenerateInformedSetError&) {
        // The informed set has no interior: the current solution cost cannot
        // be improved by further sampling.
        converged_ = true;
        return Event::kNone;
    }
    graph_.add_samples(samples, *oracle_);

    const std::size_t q = graph_.informed_count(c_current_);
    graph_.set_radius(rgg_radius(problem_->space.dimension(), std::max<std::size_t>(q, 2),
                                 informed_measure(*problem_, c_current_), config_.eta));
    graph_.rebuild_index();

    queue_.clear();
    push_expand(graph_.start_id());
    if (config_.mode == HeuristicMode::kAdaptive) {
        reverse_.restart(graph_);
        continue_reverse_search();
    }
    queue_.rekey_all([this](StateId p, StateId c) { return edge_key(p, c); });
    ++counters_.num_batches;
    return Event::kBatchAdded;
}

Planner::Event Planner::iterate() {
    ++counters_.num_iterations;
    if (converged_) {
        return Event::kNone;
    }
    if (config_.mode == HeuristicMode::kAdaptive) {
        continue_reverse_search();
    }
    if (queue_.empty()) {
        return add_batch();
    }
    const auto popped = queue_.pop_best([this](StateId p, StateId c) { return edge_key(p, c); });
    ++counters_.num_queue_pops;
    const auto [edge, key] = *popped;
    const StateId parent = edge.parent;
    const StateId child = edge.child;

    // Can the edge possibly improve the current solution?
    if (!(key.k1 < c_current_)) {
        return add_batch();
    }

    // A tree edge is re-expanded for free.
    if (graph_.f_parent(child) == parent) {
        push_expand(child);
        return Event::kEdgeProcessed;
    }

    // Can it possibly improve the tree?
    if (graph_.g(parent) + graph_.distance(parent, child) < graph_.g(child)) {
        if (!oracle_->is_valid_motion(graph_.state(parent), graph_.state(child))) {
            graph_.add_invalid_edge(parent, child);
            if (config_.mode == HeuristicMode::kAdaptive) {
                reverse_.handle_invalid_edge(graph_, parent, child);
                continue_reverse_search();
            }
            return Event::kEdgeProcessed;
        }
        const double cost = graph_.distance(parent, child);  // true cost: path length
        if (graph_.g(parent) + cost + heuristic(child) < c_current_) {
            if (graph_.g(parent) + cost < graph_.g(child)) {
                scratch_changed_.clear();
                graph_.f_set_edge(parent, child, cost, scratch_changed_);
                for (const StateId v : scratch_changed_) {
                    queue_.refresh_parent(
                        v, [this](StateId p, StateId c) { return edge_key(p, c); });
                }
                push_expand(child);
                if (update_solution()) {
                    return Event::kSolutionImproved;
                }
            }
        }
    }
    return Event::kEdgeProcessed;
}

Counters Planner::counters() const {
    Counters c = counters_;
    c.num_samples = graph_.num_samples();
    c.num_motion_checks = oracle_->num_motion_checks();
    c.num_interpolated_states = oracle_->num_interpolated_states();
    c.num_reverse_expansions = reverse_.num_expansions();
    return c;
}

std::optional<Solution> Planner::best_solution() const {
    if (!std::isfinite(c_current_)) {
        return std::nullopt;
    }
    StateId best_goal = kNoState;
    double best = kInf;
    for (const StateId goal : graph_.goal_ids()) {
        if (graph_.g(goal) < best) {
            best = graph_.g(goal);
            best_goal = goal;
        }
    }
    if (best_goal == kNoState) {
        return std::nullopt;
    }
    Solution solution;
    solution.cost = best;
    solution.counters = counters();
    std::vector<StateId> ids;
    for (StateId v = best_goal; v != kNoState; v = graph_.f_parent(v)) {
        ids.push_back(v);
        if (v == graph_.start_id()) {
            break;
        }
    }
    std::reverse(ids.begin(), ids.end());
    for (const StateId id : ids) {
        const auto x = graph_.state(id);
        solution.path.emplace_back(x.begin(), x.end());
    }
    return solution;
}

SolveResult Planner::solve(const StopCondition& stop) {
    SolveResult result;
    const auto start_time = std::chrono::steady_clock::now();
    const std::uint64_t start_iterations = counters_.num_iterations;
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    };
    while (true) {
        if (stop.wall_s && elapsed() >= *stop.wall_s) {
            break;
        }
        if (stop.iterations && counters_.num_iterations - start_iterations >= *stop.iterations) {
            break;
        }
        if (stop.logical && oracle_->num_interpolated_states() >= *stop.logical) {
            break;
        }
        if (stop.first_solution && std::isfinite(c_current_)) {
            break;
        }
        const Event event = iterate();
        if (event == Event::kNone) {
            break;  // converged: further sampling cannot improve the solution
        }
        if (event == Event::kSolutionImproved) {
            TraceEvent trace;
            trace.time_s = elapsed();
            trace.logical = oracle_->num_interpolated_states();
            trace.cost = c_current_;
            trace.counters = counters();
            result.events.push_back(trace);
        }
    }
    result.best = best_solution();
    if (result.best) {
        result.best->time_s =
            result.events.empty() ? 0.0 : result.events.back().time_s;
    }
    result.counters = counters();
    return result;
}

}  // namespace aitstar
