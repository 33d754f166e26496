#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aitstar/planner.hpp"
#include "aitstar/rng.hpp"
#include "aitstar/scenarios.hpp"
#include "oracles.hpp"

using namespace aitstar;

namespace {

struct World {
    Scenario scenario;
    ValidityOracle oracle;
    ProblemInstance problem;

    World(Scenario s, double resolution)
        : scenario(std::move(s)),
          oracle(scenario, resolution),
          problem(scenario.space, scenario.start, {scenario.goal}, oracle) {}
};

PlannerConfig quick_config(std::uint64_t seed, HeuristicMode mode = HeuristicMode::kAdaptive) {
    PlannerConfig config;
    config.seed = seed;
    config.mode = mode;
    config.batch_size = 100;
    return config;
}

Scenario shifted_free_space(double x0, double x1) {
    Scenario s = make_free_space(2);
    s.start = State{x0, 0.5};
    s.goal = State{x1, 0.5};
    return s;
}

void check_solution_validates(const Solution& solution, const Scenario& scenario,
                              double resolution, double expected_cost) {
    ValidityOracle oracle(scenario, resolution);
    REQUIRE(!solution.path.empty());
    CHECK(solution.path.front() == scenario.start);
    CHECK(solution.path.back() == scenario.goal);
    double total = 0.0;
    for (std::size_t i = 1; i < solution.path.size(); ++i) {
        REQUIRE(oracle.is_valid_motion(solution.path[i - 1], solution.path[i]));
        total += c_hat(solution.path[i - 1], solution.path[i]);
    }
    CHECK(total == doctest::Approx(expected_cost).epsilon(1e-12));
}

}  // namespace

TEST_CASE("initialize seeds the searches") {
    World w(shifted_free_space(0.25, 0.75), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(5));
    CHECK(planner.current_cost() == kInf);
    const StateId goal = planner.graph().goal_ids()[0];
    // After the initial heuristic update the goal is expanded: h labels 0.
    CHECK(planner.reverse_search().h_con(goal) == 0.0);
    CHECK(planner.reverse_search().key_of(planner.graph(), goal).k2 == 0.0);
    // Start-goal distance 0.5 is inside r(2), so the queue is non-empty and
    // the first iteration finds the direct solution.
    const auto event = planner.iterate();
    CHECK(event == Planner::Event::kSolutionImproved);
    CHECK(planner.current_cost() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("empty initial queue triggers the batch path") {
    // Start-goal distance 0.8 exceeds r(2) in this space.
    World w(make_free_space(4), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(7));
    const auto event = planner.iterate();
    CHECK(event == Planner::Event::kBatchAdded);
    CHECK(planner.graph().num_samples() > 2);
}

TEST_CASE("free-space quiescence matches the explicit-graph optimum") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        World w(shifted_free_space(0.2, 0.8), 1e-3);
        Planner planner(w.problem, w.oracle, quick_config(100 + trial));

        Graph before = planner.graph();
        int batches = 0;
        while (batches < 2) {
            Graph snapshot = planner.graph();
            const auto event = planner.iterate();
            if (event == Planner::Event::kBatchAdded) {
                before = std::move(snapshot);
                ++batches;
                if (batches == 2) {
                    ValidityOracle fresh(w.scenario, 1e-3);
                    const double optimum = oracles::explicit_graph_optimum(before, fresh);
                    REQUIRE(std::isfinite(optimum));
                    REQUIRE(planner.current_cost() ==
                            doctest::Approx(optimum).epsilon(1e-9));
                }
            }
            if (event == Planner::Event::kNone) {
                break;
            }
        }
    }
}

TEST_CASE("wall-gap batch quiescence matches the oracle with full evaluation") {
    for (int trial = 0; trial < 3; ++trial) {
        World w(make_wall_gap(2), 1e-3);
        Planner planner(w.problem, w.oracle, quick_config(200 + trial));
        Graph before = planner.graph();
        int batches = 0;
        for (int i = 0; i < 200000 && batches < 2; ++i) {
            Graph snapshot = planner.graph();
            const auto event = planner.iterate();
            if (event == Planner::Event::kBatchAdded) {
                before = std::move(snapshot);
                ++batches;
                ValidityOracle fresh(w.scenario, 1e-3);
                const double optimum = oracles::explicit_graph_optimum(before, fresh);
                if (std::isfinite(optimum) || std::isfinite(planner.current_cost())) {
                    REQUIRE(planner.current_cost() ==
                            doctest::Approx(optimum).epsilon(1e-9));
                }
            }
            REQUIRE(event != Planner::Event::kNone);
        }
        CHECK(batches == 2);
    }
}

TEST_CASE("anytime costs decrease strictly and revalidate") {
    World w(make_wall_gap(2), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(17));
    StopCondition stop;
    stop.iterations = 30000;
    const SolveResult result = planner.solve(stop);
    REQUIRE(result.best.has_value());
    for (std::size_t i = 1; i < result.events.size(); ++i) {
        REQUIRE(result.events[i].cost < result.events[i - 1].cost);
        REQUIRE(result.events[i].time_s >= result.events[i - 1].time_s);
    }
    check_solution_validates(*result.best, w.scenario, 1e-3, result.best->cost);
    // The taut path through the gap bounds the achievable cost from below.
    CHECK(result.best->cost >= *w.scenario.reference_cost - 1e-9);
}

TEST_CASE("invalid edges grow the registry and weakly raise the heuristic") {
    World w(make_wall_gap(2), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(23));
    std::vector<double> before;
    std::size_t last_invalid = 0;
    bool saw_invalidation = false;
    for (int i = 0; i < 20000 && !saw_invalidation; ++i) {
        const auto& graph = planner.graph();
        before.assign(graph.capacity(), 0.0);
        for (StateId id = 0; id < graph.capacity(); ++id) {
            before[id] = planner.reverse_search().h_con(id);
        }
        last_invalid = graph.num_invalid_edges();
        const auto event = planner.iterate();
        REQUIRE(event != Planner::Event::kNone);
        if (planner.graph().num_invalid_edges() == last_invalid + 1) {
            saw_invalidation = true;
            // Quiesce a copy and check no label decreased relative to the
            // pre-invalidation quiesced labels.
            Graph graph_copy = planner.graph();
            ReverseSearch search_copy = planner.reverse_search();
            search_copy.run_to_quiescence(graph_copy);
            for (StateId id = 0; id < before.size(); ++id) {
                if (!graph_copy.alive(id)) {
                    continue;
                }
                REQUIRE(search_copy.h_con(id) >= before[id] - 1e-12);
            }
        }
    }
    CHECK(saw_invalidation);
}

TEST_CASE("repair equals restart mid-run") {
    World w(make_goal_enclosure(2), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(29));
    std::size_t invalidations = 0;
    for (int i = 0; i < 30000 && invalidations < 3; ++i) {
        const std::size_t last_invalid = planner.graph().num_invalid_edges();
        const auto event = planner.iterate();
        if (event == Planner::Event::kNone) {
            break;
        }
        if (planner.graph().num_invalid_edges() > last_invalid) {
            ++invalidations;
            Graph repaired_graph = planner.graph();
            ReverseSearch repaired = planner.reverse_search();
            repaired.run_to_quiescence(repaired_graph);

            Graph fresh_graph = planner.graph();
            ReverseSearch fresh;
            fresh.restart(fresh_graph);
            fresh.run_to_quiescence(fresh_graph);
            for (const StateId id : fresh_graph.alive_ids()) {
                if (std::isfinite(fresh.h_con(id)) || std::isfinite(repaired.h_con(id))) {
                    REQUIRE(repaired.h_con(id) ==
                            doctest::Approx(fresh.h_con(id)).epsilon(1e-9));
                }
            }
        }
    }
    CHECK(invalidations >= 1);
}

TEST_CASE("edge evaluation frugality in free space") {
    World w(shifted_free_space(0.2, 0.8), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(31));
    StopCondition stop;
    stop.iterations = 3000;
    planner.solve(stop);
    const Counters counters = planner.counters();
    CHECK(counters.num_motion_checks <= counters.num_queue_pops);
}

TEST_CASE("determinism of the full event trace") {
    for (const HeuristicMode mode :
         {HeuristicMode::kAdaptive, HeuristicMode::kStaticEuclidean}) {
        auto run = [&](std::uint64_t seed) {
            World w(make_wall_gap(2), 1e-3);
            Planner planner(w.problem, w.oracle, quick_config(seed, mode));
            StopCondition stop;
            stop.iterations = 8000;
            return planner.solve(stop);
        };
        const SolveResult a = run(77);
        const SolveResult b = run(77);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            REQUIRE(a.events[i].cost == b.events[i].cost);
            REQUIRE(a.events[i].counters.num_motion_checks ==
                    b.events[i].counters.num_motion_checks);
            REQUIRE(a.events[i].counters.num_queue_pops ==
                    b.events[i].counters.num_queue_pops);
            REQUIRE(a.events[i].counters.num_samples == b.events[i].counters.num_samples);
        }
        REQUIRE(a.counters.num_interpolated_states == b.counters.num_interpolated_states);
        const SolveResult c = run(78);
        CHECK(a.counters.num_interpolated_states != c.counters.num_interpolated_states);
    }
}

TEST_CASE("static-Euclidean mode runs no reverse search") {
    World w(make_wall_gap(2), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(41, HeuristicMode::kStaticEuclidean));
    StopCondition stop;
    stop.iterations = 8000;
    const SolveResult result = planner.solve(stop);
    CHECK(result.counters.num_reverse_expansions == 0);
    REQUIRE(result.best.has_value());
    check_solution_validates(*result.best, w.scenario, 1e-3, result.best->cost);
    // The invalid-edge registry is still maintained.
    CHECK(planner.graph().num_invalid_edges() > 0);
}

TEST_CASE("zero budget yields no solution and an empty trace") {
    World w(make_wall_gap(2), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(43));
    StopCondition stop;
    stop.iterations = 0;
    const SolveResult result = planner.solve(stop);
    CHECK_FALSE(result.best.has_value());
    CHECK(result.events.empty());
}

TEST_CASE("convergence on the straight-line optimum stops the planner") {
    World w(shifted_free_space(0.25, 0.75), 1e-3);
    Planner planner(w.problem, w.oracle, quick_config(47));
    StopCondition stop;
    stop.iterations = 2000;
    const SolveResult result = planner.solve(stop);
    REQUIRE(result.best.has_value());
    CHECK(result.best->cost == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(planner.converged());
    CHECK(planner.iterate() == Planner::Event::kNone);
}

TEST_CASE("pruning keeps the informed samples only") {
    World w(make_wall_gap(2), 1e-3);
    PlannerConfig config = quick_config(53);
    config.pruning = true;
    Planner pruned(w.problem, w.oracle, config);
    StopCondition stop;
    stop.iterations = 6000;
    pruned.solve(stop);
    const double c = pruned.current_cost();
    REQUIRE(std::isfinite(c));
    // All alive samples are members of the informed set (goals and start
    // included by construction).
    std::size_t outside = 0;
    for (const StateId id : pruned.graph().alive_ids()) {
        if (pruned.graph().f_hat(id) > c && !pruned.graph().in_forward_tree(id) &&
            id != pruned.graph().start_id() && !pruned.graph().is_goal(id)) {
            ++outside;
        }
    }
    // Samples drawn after the last improvement may be outside; bounded by
    // one batch.
    CHECK(outside <= config.batch_size);

    ValidityOracle oracle2(w.scenario, 1e-3);
    const ProblemInstance problem2(w.scenario.space, w.scenario.start, {w.scenario.goal},
                                   oracle2);
    PlannerConfig config2 = quick_config(53);
    config2.pruning = false;
    Planner unpruned(problem2, oracle2, config2);
    unpruned.solve(stop);
    // Same seed, same decisions: pruning must not change the search result.
    CHECK(unpruned.current_cost() == doctest::Approx(pruned.current_cost()).epsilon(1e-12));
}
