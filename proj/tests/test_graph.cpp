#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aitstar/graph.hpp"
#include "aitstar/kdtree.hpp"
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

    explicit World(Scenario s, double resolution = 1e-4)
        : scenario(std::move(s)),
          oracle(scenario, resolution),
          problem(scenario.space, scenario.start, {scenario.goal}, oracle),
          graph(problem) {}
};

std::vector<State> random_states(Rng& rng, std::size_t count, std::size_t n) {
    std::vector<State> states;
    for (std::size_t i = 0; i < count; ++i) {
        State x(n);
        for (std::size_t d = 0; d < n; ++d) {
            x[d] = rng.uniform01();
        }
        states.push_back(std::move(x));
    }
    return states;
}

std::vector<StateId> brute_force_radius(const Graph& graph, StateId x, double r) {
    std::vector<StateId> result;
    for (const StateId y : graph.alive_ids()) {
        if (y == x) {
            continue;
        }
        double sq = 0.0;
        const auto a = graph.state(x);
        const auto b = graph.state(y);
        for (std::size_t d = 0; d < a.size(); ++d) {
            sq += (a[d] - b[d]) * (a[d] - b[d]);
        }
        if (std::sqrt(sq) <= r) {
            result.push_back(y);
        }
    }
    return result;
}

}  // namespace

TEST_CASE("constructor seeds start and goals") {
    World w(make_free_space(2));
    CHECK(w.graph.num_samples() == 2);
    CHECK(w.graph.start_id() == 0);
    REQUIRE(w.graph.goal_ids().size() == 1);
    CHECK(w.graph.is_goal(w.graph.goal_ids()[0]));
    CHECK(w.graph.g(0) == 0.0);
    CHECK(w.graph.g(w.graph.goal_ids()[0]) == kInf);
    CHECK(w.graph.g_hat(0) == 0.0);
    CHECK(w.graph.h_hat_apriori(w.graph.goal_ids()[0]) == 0.0);
}

TEST_CASE("add_samples filters invalid states") {
    World w(make_wall_gap(2));
    CHECK(w.graph.add_samples({}, w.oracle).empty());

    Rng rng(3);
    const auto states = random_states(rng, 200, 2);
    std::size_t expected_valid = 0;
    {
        ValidityOracle recount(w.scenario);
        for (const State& x : states) {
            if (recount.is_valid_state(x)) {
                ++expected_valid;
            }
        }
    }
    const auto ids = w.graph.add_samples(states, w.oracle);
    CHECK(ids.size() == expected_valid);
    CHECK(w.graph.num_samples() == 2 + expected_valid);

    // Identifiers are stable and unique.
    std::vector<StateId> sorted(ids);
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("neighbors covers radius, trees, and blacklist") {
    World w(make_free_space(2));
    Rng rng(11);
    w.graph.add_samples(random_states(rng, 30, 2), w.oracle);

    SUBCASE("huge radius reaches everyone") {
        w.graph.set_radius(10.0);
        w.graph.rebuild_index();
        const auto n0 = w.graph.neighbors(0);
        CHECK(n0.size() == w.graph.num_samples() - 1);
        CHECK(std::find(n0.begin(), n0.end(), 0) == n0.end());
    }

    SUBCASE("tiny radius with no tree edges is empty") {
        w.graph.set_radius(1e-9);
        w.graph.rebuild_index();
        CHECK(w.graph.neighbors(0).empty());
    }

    SUBCASE("tree adjacency joins the neighbor set") {
        w.graph.set_radius(1e-9);
        w.graph.rebuild_index();
        std::vector<StateId> changed;
        w.graph.f_set_edge(0, 5, w.graph.distance(0, 5), changed);
        const auto n0 = w.graph.neighbors(0);
        CHECK(n0 == std::vector<StateId>{5});
        const auto n5 = w.graph.neighbors(5);
        CHECK(n5 == std::vector<StateId>{0});
        // Reverse tree augmentation.
        w.graph.r_set_parent(7, 9);
        CHECK(w.graph.neighbors(7) == std::vector<StateId>{9});
        CHECK(w.graph.neighbors(9) == std::vector<StateId>{7});
    }

    SUBCASE("blacklisted radius neighbor with far reverse parent") {
        // Fixture: state x has exactly one radius neighbor, which is
        // blacklisted, and a reverse parent outside the radius.
        World fx(make_free_space(2));
        const std::vector<State> states{{0.1, 0.1}, {0.12, 0.1}, {0.9, 0.9}};
        const auto ids = fx.graph.add_samples(states, fx.oracle);
        REQUIRE(ids.size() == 3);
        fx.graph.set_radius(0.05);
        fx.graph.rebuild_index();
        const StateId x = ids[0];
        CHECK(fx.graph.neighbors(x) == std::vector<StateId>{ids[1]});
        fx.graph.add_invalid_edge(x, ids[1]);
        CHECK(fx.graph.neighbors(x).empty());
        fx.graph.r_set_parent(x, ids[2]);
        CHECK(fx.graph.neighbors(x) == std::vector<StateId>{ids[2]});
    }
}

TEST_CASE("expand emits identifier-sorted edges and matches brute force") {
    World w(make_free_space(2));
    Rng rng(19);
    w.graph.add_samples(random_states(rng, 50, 2), w.oracle);
    w.graph.set_radius(0.3);
    w.graph.rebuild_index();

    for (const StateId x : w.graph.alive_ids()) {
        const auto edges = w.graph.expand(x);
        const auto brute = brute_force_radius(w.graph, x, 0.3);
        REQUIRE(edges.size() == brute.size());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            CHECK(edges[i].parent == x);
            CHECK(edges[i].child == brute[i]);  // both sorted by id
        }
        CHECK(std::is_sorted(edges.begin(), edges.end(),
                             [](const DirectedEdge& a, const DirectedEdge& b) {
                                 return a.child < b.child;
                             }));
    }
}

TEST_CASE("radius query equals brute force on random configurations") {
    Rng rng(23);
    for (int config = 0; config < 100; ++config) {
        World w(make_free_space(2));
        w.graph.add_samples(random_states(rng, 1 + rng.uniform_index(120), 2), w.oracle);
        const double r = rng.uniform(0.01, 0.8);
        w.graph.set_radius(r);
        w.graph.rebuild_index();
        const StateId x =
            w.graph.alive_ids()[rng.uniform_index(w.graph.alive_ids().size())];
        REQUIRE(w.graph.neighbors(x) == brute_force_radius(w.graph, x, r));
    }
}

TEST_CASE("neighbors symmetry for pure-radius pairs") {
    World w(make_free_space(2));
    Rng rng(29);
    w.graph.add_samples(random_states(rng, 80, 2), w.oracle);
    w.graph.set_radius(0.25);
    w.graph.rebuild_index();
    for (const StateId x : w.graph.alive_ids()) {
        for (const StateId y : w.graph.neighbors(x)) {
            const auto ny = w.graph.neighbors(y);
            REQUIRE(std::find(ny.begin(), ny.end(), x) != ny.end());
        }
    }
}

TEST_CASE("forward tree cost coherence under random edits") {
    World w(make_free_space(2));
    Rng rng(37);
    w.graph.add_samples(random_states(rng, 60, 2), w.oracle);
    w.graph.set_radius(10.0);
    w.graph.rebuild_index();

    std::vector<StateId> in_tree{0};
    std::vector<StateId> changed;
    for (int step = 0; step < 1000; ++step) {
        const StateId parent = in_tree[rng.uniform_index(in_tree.size())];
        const StateId child =
            w.graph.alive_ids()[rng.uniform_index(w.graph.alive_ids().size())];
        if (child == 0 || child == parent) {
            continue;
        }
        const double cost = w.graph.distance(parent, child);
        // Only edits that strictly improve keep the tree acyclic.
        if (!(w.graph.g(parent) + cost < w.graph.g(child))) {
            continue;
        }
        changed.clear();
        w.graph.f_set_edge(parent, child, cost, changed);
        if (!w.graph.in_forward_tree(child) ||
            std::find(in_tree.begin(), in_tree.end(), child) == in_tree.end()) {
            in_tree.push_back(child);
        }
        REQUIRE(!changed.empty());
        REQUIRE(changed.front() == child);
    }

    // Recompute costs root-to-leaf and compare.
    for (const StateId v : in_tree) {
        if (v == 0) {
            continue;
        }
        double accumulated = 0.0;
        StateId cursor = v;
        while (cursor != 0) {
            accumulated += w.graph.f_edge_cost(cursor);
            cursor = w.graph.f_parent(cursor);
            REQUIRE(cursor != kNoState);
        }
        REQUIRE(w.graph.g(v) == doctest::Approx(accumulated).epsilon(1e-12));
    }
}

TEST_CASE("prune removes exactly the unreachable states") {
    World w(make_free_space(2));

    SUBCASE("infinite cost removes nothing") {
        Rng rng(41);
        w.graph.add_samples(random_states(rng, 50, 2), w.oracle);
        CHECK(w.graph.prune(kInf).empty());
        CHECK(w.graph.num_samples() == 52);
    }

    SUBCASE("fixture with a known split") {
        // Start (0.1,0.5), goal (0.9,0.5): f_hat(x) = |x-start| + |x-goal|.
        std::vector<State> states;
        for (int i = 0; i < 6; ++i) {  // on the segment: f_hat = 0.8
            states.push_back(State{0.2 + 0.1 * i, 0.5});
        }
        for (int i = 0; i < 4; ++i) {  // far off: f_hat > 1.2
            states.push_back(State{0.1 + 0.2 * i, 0.99});
        }
        const auto ids = w.graph.add_samples(states, w.oracle);
        REQUIRE(ids.size() == 10);
        const auto removed = w.graph.prune(1.0);
        CHECK(removed.size() == 4);
        CHECK(w.graph.num_samples() == 8);
        // On-segment samples survive any bound >= 0.8.
        CHECK(w.graph.prune(0.8).empty());
    }

    SUBCASE("tree branches beyond the bound go with their subtree") {
        const auto ids = w.graph.add_samples(
            std::vector<State>{{0.5, 0.5}, {0.5, 0.99}, {0.52, 0.99}}, w.oracle);
        std::vector<StateId> changed;
        w.graph.f_set_edge(0, ids[0], w.graph.distance(0, ids[0]), changed);
        w.graph.f_set_edge(ids[0], ids[1], w.graph.distance(ids[0], ids[1]), changed);
        w.graph.f_set_edge(ids[1], ids[2], w.graph.distance(ids[1], ids[2]), changed);
        // ids[1] has f_hat > 1.3; its child ids[2] too. Bound keeps ids[0].
        const auto removed = w.graph.prune(1.0);
        CHECK(removed.size() == 2);
        CHECK(w.graph.in_forward_tree(ids[0]));
        CHECK_FALSE(w.graph.in_forward_tree(ids[1]));
        CHECK_FALSE(w.graph.in_forward_tree(ids[2]));
        CHECK(w.graph.g(ids[2]) == kInf);
        CHECK(w.graph.f_children(ids[0]).empty());
    }
}

TEST_CASE("blacklist persists across batches") {
    World w(make_free_space(2));
    const auto ids =
        w.graph.add_samples(std::vector<State>{{0.4, 0.5}, {0.45, 0.5}}, w.oracle);
    w.graph.set_radius(0.5);
    w.graph.rebuild_index();
    w.graph.add_invalid_edge(ids[0], ids[1]);
    auto check_absent = [&] {
        const auto n = w.graph.neighbors(ids[0]);
        REQUIRE(std::find(n.begin(), n.end(), ids[1]) == n.end());
        const auto m = w.graph.neighbors(ids[1]);
        REQUIRE(std::find(m.begin(), m.end(), ids[0]) == m.end());
    };
    check_absent();
    CHECK(w.graph.is_invalid_edge(ids[1], ids[0]));  // unordered
    // New batches and index rebuilds keep the registry.
    Rng rng(43);
    w.graph.add_samples(random_states(rng, 40, 2), w.oracle);
    w.graph.rebuild_index();
    check_absent();
}

TEST_CASE("graph dump is line-oriented and complete") {
    World w(make_free_space(2));
    const auto ids = w.graph.add_samples(std::vector<State>{{0.3, 0.3}}, w.oracle);
    std::vector<StateId> changed;
    w.graph.f_set_edge(0, ids[0], w.graph.distance(0, ids[0]), changed);
    w.graph.r_set_parent(ids[0], w.graph.goal_ids()[0]);
    w.graph.add_invalid_edge(0, w.graph.goal_ids()[0]);
    std::ostringstream out;
    w.graph.dump(out);
    const std::string text = out.str();
    CHECK(text.find("state 0 1 ") != std::string::npos);
    CHECK(text.find("fedge 0 2 ") != std::string::npos);
    CHECK(text.find("redge 1 2") != std::string::npos);
    CHECK(text.find("invalid 0 1") != std::string::npos);
}
