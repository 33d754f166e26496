#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aitstar/reverse_search.hpp"
#include "aitstar/rng.hpp"
#include "aitstar/scenarios.hpp"
#include "oracles.hpp"

using namespace aitstar;

namespace {

struct World {
    Scenario scenario;
    ValidityOracle oracle;
    ProblemInstance problem;
    Graph graph;
    ReverseSearch search;

    World(Scenario s, double resolution = 1e-3)
        : scenario(std::move(s)),
          oracle(scenario, resolution),
          problem(scenario.space, scenario.start, {scenario.goal}, oracle),
          graph(problem) {}
};

Scenario random_box_scenario(Rng& rng, std::size_t num_boxes) {
    Scenario s = make_free_space(2);
    s.name = "random_boxes";
    for (std::size_t b = 0; b < num_boxes; ++b) {
        AxisAlignedBox box{{0.0, 0.0}, {0.0, 0.0}};
        for (std::size_t d = 0; d < 2; ++d) {
            const double lo = rng.uniform(0.0, 0.85);
            box.lo[d] = lo;
            box.hi[d] = lo + rng.uniform(0.02, 0.25);
        }
        // Keep start and goal valid.
        if (box.contains(s.start) || box.contains(s.goal)) {
            continue;
        }
        s.obstacles.push_back(std::move(box));
    }
    return s;
}

void populate(World& w, Rng& rng, std::size_t count, double radius) {
    std::vector<State> states;
    for (std::size_t i = 0; i < count; ++i) {
        states.push_back(State{rng.uniform01(), rng.uniform01()});
    }
    w.graph.add_samples(states, w.oracle);
    w.graph.set_radius(radius);
    w.graph.rebuild_index();
}

std::vector<std::pair<StateId, StateId>> all_edges(const Graph& graph) {
    std::vector<std::pair<StateId, StateId>> edges;
    for (const StateId x : graph.alive_ids()) {
        for (const StateId y : graph.neighbors(x)) {
            if (x < y) {
                edges.push_back({x, y});
            }
        }
    }
    return edges;
}

void check_labels_match_oracle(const World& w, const ReverseSearch& search, double tol) {
    const auto dist = oracles::dijkstra_to_goals(w.graph);
    for (const StateId x : w.graph.alive_ids()) {
        if (std::isfinite(dist[x]) || std::isfinite(search.h_con(x))) {
            REQUIRE(search.h_con(x) == doctest::Approx(dist[x]).epsilon(tol));
        }
    }
}

}  // namespace

TEST_CASE("restart resets labels and seeds goals") {
    World w(make_free_space(2));
    Rng rng(3);
    populate(w, rng, 20, 0.4);
    w.search.restart(w.graph);
    const StateId goal = w.graph.goal_ids()[0];
    CHECK(w.search.h_con(goal) == 0.0);
    CHECK(w.search.h_exp(goal) == kInf);
    const ReverseKey key = w.search.key_of(w.graph, goal);
    CHECK(key.k1 == doctest::Approx(w.graph.g_hat(goal)).epsilon(1e-15));
    CHECK(key.k2 == 0.0);
    // Non-goal states report infinity.
    CHECK(w.search.h_con(0) == kInf);
    CHECK(w.search.h_exp(0) == kInf);
    CHECK(w.search.queue_size() == 1);

    // Idempotent.
    w.search.restart(w.graph);
    CHECK(w.search.h_con(goal) == 0.0);
    CHECK(w.search.queue_size() == 1);
    CHECK(w.search.queue_invariant_holds());
}

TEST_CASE("collinear chain labels equal straight-line costs") {
    World w(make_free_space(2));
    const auto ids = w.graph.add_samples(std::vector<State>{{0.5, 0.5}}, w.oracle);
    const StateId mid = ids[0];
    w.graph.set_radius(0.45);  // consecutive edges only
    w.graph.rebuild_index();
    w.search.restart(w.graph);
    w.search.run_to_quiescence(w.graph);
    CHECK(w.search.h_con(0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(w.search.h_con(mid) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(w.search.queue_invariant_holds());

    // Invalidate the goal's only incoming edge: everything degrades to
    // infinity.
    const StateId goal = w.graph.goal_ids()[0];
    w.search.handle_invalid_edge(w.graph, mid, goal);
    w.search.run_to_quiescence(w.graph);
    CHECK(w.search.h_con(mid) == kInf);
    CHECK(w.search.h_con(0) == kInf);
}

TEST_CASE("update_state picks the arg-min neighbor") {
    World w(make_free_space(2));
    // Goal at (0.2, 0.2); two relays A and B; X reaches only A and B.
    ValidityOracle oracle(w.scenario);
    const ProblemInstance problem(w.scenario.space, State{0.05, 0.9},
                                  {State{0.2, 0.2}}, oracle);
    Graph graph(problem);
    const auto ids = graph.add_samples(
        std::vector<State>{{0.2, 0.4},
                           {0.6, 0.2},
                           {0.69930285549745874, 0.37360571099491752}},
        oracle);
    const StateId a = ids[0], b = ids[1], x = ids[2];
    graph.set_radius(0.51);  // excludes goal-X (0.5286)
    graph.rebuild_index();
    ReverseSearch search;
    search.restart(graph);
    search.run_to_quiescence(graph);
    // h_exp(A) = 0.2 with c(A,X) = 0.5; h_exp(B) = 0.4 with c(B,X) = 0.2.
    CHECK(search.h_exp(a) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(search.h_exp(b) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(search.h_con(x) == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(graph.r_parent(x) == b);

    // A state whose neighbors are all unreached stays consistent at
    // infinity and out of the queue.
    const auto far = graph.add_samples(std::vector<State>{{0.97, 0.97}}, oracle);
    graph.rebuild_index();
    search.restart(graph);
    search.run_to_quiescence(graph);
    CHECK(search.h_con(far[0]) == kInf);
    CHECK(search.queue_invariant_holds());
}

TEST_CASE("suspended run still labels the start exactly") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        World w(random_box_scenario(rng, 3));
        populate(w, rng, 120, 0.25);
        w.search.restart(w.graph);
        w.search.run(w.graph, nullptr);
        const auto dist = oracles::dijkstra_to_goals(w.graph);
        REQUIRE(w.search.h_con(0) == doctest::Approx(dist[0]).epsilon(1e-9));
        REQUIRE(w.search.queue_invariant_holds());
    }
}

TEST_CASE("oracle equivalence at quiescence on random graphs") {
    Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        World w(random_box_scenario(rng, 1 + rng.uniform_index(4)));
        populate(w, rng, 40 + rng.uniform_index(120), rng.uniform(0.15, 0.45));
        w.search.restart(w.graph);
        w.search.run_to_quiescence(w.graph);
        check_labels_match_oracle(w, w.search, 1e-9);
        REQUIRE(w.search.queue_invariant_holds());
    }
}

TEST_CASE("incremental repair equals restart from scratch") {
    Rng rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        World w(random_box_scenario(rng, 2));
        populate(w, rng, 100, 0.3);
        w.search.restart(w.graph);
        w.search.run_to_quiescence(w.graph);

        for (int invalidation = 0; invalidation < 10; ++invalidation) {
            const auto edges = all_edges(w.graph);
            if (edges.empty()) {
                break;
            }
            const auto [x, y] = edges[rng.uniform_index(edges.size())];

            std::vector<double> before(w.graph.capacity());
            for (const StateId id : w.graph.alive_ids()) {
                before[id] = w.search.h_con(id);
            }

            // Incremental repair.
            w.search.handle_invalid_edge(w.graph, x, y);
            w.search.run_to_quiescence(w.graph);

            // Restart cross-check on a copy of the same graph.
            Graph fresh_graph = w.graph;
            ReverseSearch fresh;
            fresh.restart(fresh_graph);
            fresh.run_to_quiescence(fresh_graph);
            for (const StateId id : w.graph.alive_ids()) {
                if (std::isfinite(fresh.h_con(id)) || std::isfinite(w.search.h_con(id))) {
                    REQUIRE(w.search.h_con(id) ==
                            doctest::Approx(fresh.h_con(id)).epsilon(1e-9));
                }
                // Monotone degradation.
                REQUIRE(w.search.h_con(id) >= before[id] - 1e-12);
            }
            check_labels_match_oracle(w, w.search, 1e-9);
        }
    }
}

TEST_CASE("consistency and admissibility at quiescence") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        World w(random_box_scenario(rng, 3));
        populate(w, rng, 120, 0.3);
        w.search.restart(w.graph);
        w.search.run_to_quiescence(w.graph);

        // Triangle inequality over current graph edges.
        for (const auto& [x, y] : all_edges(w.graph)) {
            const double c = w.graph.distance(x, y);
            if (std::isfinite(w.search.h_con(y))) {
                REQUIRE(w.search.h_con(x) <= c + w.search.h_con(y) + 1e-12);
            }
            if (std::isfinite(w.search.h_con(x))) {
                REQUIRE(w.search.h_con(y) <= c + w.search.h_con(x) + 1e-12);
            }
        }

        // Admissibility against the fully evaluated graph: the lazy label
        // never exceeds the true-graph cost-to-go.
        std::vector<double> true_dist(w.graph.capacity(), kInf);
        {
            using Item = std::pair<double, StateId>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
            for (const StateId goal : w.graph.goal_ids()) {
                true_dist[goal] = 0.0;
                queue.push({0.0, goal});
            }
            while (!queue.empty()) {
                const auto [d, x] = queue.top();
                queue.pop();
                if (d > true_dist[x]) {
                    continue;
                }
                for (const StateId y : w.graph.neighbors(x)) {
                    const double candidate = d + w.graph.distance(x, y);
                    if (candidate < true_dist[y] &&
                        w.oracle.is_valid_motion(w.graph.state(x), w.graph.state(y))) {
                        true_dist[y] = candidate;
                        queue.push({candidate, y});
                    }
                }
            }
        }
        for (const StateId x : w.graph.alive_ids()) {
            if (std::isfinite(true_dist[x])) {
                REQUIRE(w.search.h_con(x) <= true_dist[x] + 1e-9);
            }
        }
    }
}

TEST_CASE("unreachable start exhausts the queue") {
    World w(make_free_space(2));
    // A cluster near the goal, nothing near the start.
    w.graph.add_samples(std::vector<State>{{0.85, 0.5}, {0.8, 0.45}}, w.oracle);
    w.graph.set_radius(0.12);
    w.graph.rebuild_index();
    w.search.restart(w.graph);
    w.search.run(w.graph, nullptr);
    CHECK(w.search.h_con(0) == kInf);
    CHECK(w.search.queue_empty());
}

TEST_CASE("forward-pending condition keeps the search running") {
    Rng rng(41);
    World w(random_box_scenario(rng, 2));
    populate(w, rng, 80, 0.3);

    // With the condition always true the loop must drain the queue.
    w.search.restart(w.graph);
    w.search.run(w.graph, [] { return true; });
    CHECK(w.search.queue_empty());
    check_labels_match_oracle(w, w.search, 1e-9);
}

TEST_CASE("unprocessed tally tracks endpoints") {
    UnprocessedTally tally;
    tally.ensure_capacity(8);
    CHECK_FALSE(tally.any_unprocessed());
    tally.on_edge_added(1, 2);
    CHECK_FALSE(tally.any_unprocessed());
    tally.set_inconsistent(2, true);
    CHECK(tally.any_unprocessed());
    tally.set_inconsistent(2, false);
    CHECK_FALSE(tally.any_unprocessed());
    tally.set_inconsistent(1, true);
    CHECK(tally.any_unprocessed());
    tally.on_edge_removed(1, 2);
    CHECK_FALSE(tally.any_unprocessed());
    tally.on_edge_added(3, 1);
    CHECK(tally.any_unprocessed());
    tally.reset_flags();
    CHECK_FALSE(tally.any_unprocessed());
}
