#include "aitstar/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "aitstar/kernels.hpp"

namespace aitstar {
namespace {

double resolve_max_edge_length(const RrtConfig& config, std::size_t n) {
    return config.max_edge_length > 0.0 ? config.max_edge_length : default_max_edge_length(n);
}

// Simple growable tree over flat coordinates; nearest/near queries are
// linear scans through the distance kernel.
class SampleTree {
  public:
    explicit SampleTree(std::size_t dim) : dim_(dim) {}

    std::uint32_t add(std::span<const double> x, std::uint32_t parent, double edge_cost) {
        coords_.insert(coords_.end(), x.begin(), x.end());
        parent_.push_back(parent);
        children_.emplace_back();
        const double parent_g = parent == kNoState ? 0.0 : g_[parent];
        g_.push_back(parent == kNoState ? 0.0 : parent_g + edge_cost);
        edge_cost_.push_back(edge_cost);
        if (parent != kNoState) {
            children_[parent].push_back(size() - 1);
        }
        return size() - 1;
    }

    std::uint32_t size() const { return static_cast<std::uint32_t>(parent_.size()); }
    std::span<const double> state(std::uint32_t id) const {
        return {coords_.data() + std::size_t(id) * dim_, dim_};
    }
    double g(std::uint32_t id) const { return g_[id]; }
    std::uint32_t parent(std::uint32_t id) const { return parent_[id]; }

    double distance(std::uint32_t id, std::span<const double> x) const {
        return std::sqrt(
            kernels::ops().squared_distance(coords_.data() + std::size_t(id) * dim_, x.data(),
                                            dim_));
    }

    std::uint32_t nearest(std::span<const double> x) const {
        dists_.resize(size());
        kernels::ops().squared_distances(x.data(), coords_.data(), size(), dim_, dists_.data());
        std::uint32_t best = 0;
        for (std::uint32_t i = 1; i < size(); ++i) {
            if (dists_[i] < dists_[best]) {
                best = i;
            }
        }
        return best;
    }

    void near(std::span<const double> x, double radius, std::vector<std::uint32_t>& out) const {
        dists_.resize(size());
        kernels::ops().squared_distances(x.data(), coords_.data(), size(), dim_, dists_.data());
        const double r_sq = radius * radius;
        out.clear();
        for (std::uint32_t i = 0; i < size(); ++i) {
            if (dists_[i] <= r_sq) {
                out.push_back(i);
            }
        }
    }

    void rewire(std::uint32_t child, std::uint32_t new_parent, double edge_cost) {
        auto& old_children = children_[parent_[child]];
        old_children.erase(std::find(old_children.begin(), old_children.end(), child));
        parent_[child] = new_parent;
        edge_cost_[child] = edge_cost;
        children_[new_parent].push_back(child);
        std::vector<std::uint32_t> stack{child};
        g_[child] = g_[new_parent] + edge_cost;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (const std::uint32_t c : children_[v]) {
                g_[c] = g_[v] + edge_cost_[c];
                stack.push_back(c);
            }
        }
    }

    std::vector<State> path_to_root(std::uint32_t id) const {
        std::vector<State> path;
        for (std::uint32_t v = id; v != kNoState; v = parent_[v]) {
            const auto x = state(v);
            path.emplace_back(x.begin(), x.end());
        }
        return path;
    }

  private:
    std::size_t dim_;
    std::vector<double> coords_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::vector<std::uint32_t>> children_;
    std::vector<double> g_;
    std::vector<double> edge_cost_;
    mutable std::vector<double> dists_;
};

State steer(std::span<const double> from, std::span<const double> to, double max_len,
            double dist) {
    State result(to.begin(), to.end());
    if (dist > max_len) {
        const double scale = max_len / dist;
        for (std::size_t d = 0; d < result.size(); ++d) {
            result[d] = from[d] + scale * (to[d] - from[d]);
        }
    }
    return result;
}

class TrialClock {
  public:
    TrialClock() : start_(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

bool stop_reached(const StopCondition& stop, const TrialClock& clock,
                  const ValidityOracle& oracle, std::uint64_t iterations, double c_current) {
    if (stop.wall_s && clock.elapsed() >= *stop.wall_s) {
        return true;
    }
    if (stop.iterations && iterations >= *stop.iterations) {
        return true;
    }
    if (stop.logical && oracle.num_interpolated_states() >= *stop.logical) {
        return true;
    }
    if (stop.first_solution && std::isfinite(c_current)) {
        return true;
    }
    return false;
}

Counters snapshot_counters(const ValidityOracle& oracle, std::uint64_t samples,
                           std::uint64_t iterations) {
    Counters c;
    c.num_samples = samples;
    c.num_motion_checks = oracle.num_motion_checks();
    c.num_interpolated_states = oracle.num_interpolated_states();
    c.num_iterations = iterations;
    return c;
}

State sample_state(Rng& rng, const StateSpace& space) {
    State x(space.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = rng.uniform(space.lower()[d], space.upper()[d]);
    }
    return x;
}

bool equals_state(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double default_max_edge_length(std::size_t n) {
    const double nd = static_cast<double>(n);
    if (n <= 4) {
        return 0.5 * nd / 4.0;
    }
    if (n <= 8) {
        return 0.5 + (1.25 - 0.5) * (nd - 4.0) / 4.0;
    }
    if (n <= 16) {
        return 1.25 + (3.0 - 1.25) * (nd - 8.0) / 8.0;
    }
    return 3.0 * nd / 16.0;
}

SolveResult rrt_solve(const ProblemInstance& problem, ValidityOracle& oracle,
                      const RrtConfig& config, const StopCondition& stop) {
    SolveResult result;
    const TrialClock clock;
    Rng rng(config.seed);
    const double max_len = resolve_max_edge_length(config, problem.space.dimension());
    SampleTree tree(problem.space.dimension());
    tree.add(problem.start, kNoState, 0.0);

    std::uint64_t iterations = 0;
    while (!stop_reached(stop, clock, oracle, iterations, kInf)) {
        ++iterations;
        const bool to_goal = rng.uniform01() < config.goal_bias;
        const State target = to_goal ? problem.goals[rng.uniform_index(problem.goals.size())]
                                     : sample_state(rng, problem.space);
        const std::uint32_t nearest = tree.nearest(target);
        const double dist = tree.distance(nearest, target);
        if (dist == 0.0) {
            continue;
        }
        const State fresh = steer(tree.state(nearest), target, max_len, dist);
        if (!oracle.is_valid_motion(tree.state(nearest), fresh)) {
            continue;
        }
        const double edge = c_hat(tree.state(nearest), fresh);
        const std::uint32_t id = tree.add(fresh, nearest, edge);
        for (const State& goal : problem.goals) {
            if (equals_state(fresh, goal)) {
                Solution solution;
                solution.cost = tree.g(id);
                solution.time_s = clock.elapsed();
                solution.counters = snapshot_counters(oracle, tree.size(), iterations);
                std::vector<State> path = tree.path_to_root(id);
                std::reverse(path.begin(), path.end());
                solution.path = std::move(path);
                result.events.push_back(TraceEvent{solution.time_s,
                                                   oracle.num_interpolated_states(),
                                                   solution.cost, solution.counters});
                result.best = std::move(solution);
                result.counters = snapshot_counters(oracle, tree.size(), iterations);
                return result;
            }
        }
    }
    result.counters = snapshot_counters(oracle, tree.size(), iterations);
    return result;
}

SolveResult rrt_star_solve(const ProblemInstance& problem, ValidityOracle& oracle,
                           const RrtConfig& config, const StopCondition& stop) {
    SolveResult result;
    const TrialClock clock;
    Rng rng(config.seed);
    const std::size_t n = problem.space.dimension();
    const double max_len = resolve_max_edge_length(config, n);
    const double space_measure = problem.space.measure();
    SampleTree tree(problem.space.dimension());
    tree.add(problem.start, kNoState, 0.0);

    std::vector<std::uint32_t> goal_nodes;
    std::vector<std::uint32_t> near;
    double c_current = kInf;
    std::uint64_t iterations = 0;

    while (!stop_reached(stop, clock, oracle, iterations, c_current)) {
        ++iterations;
        const bool to_goal = rng.uniform01() < config.goal_bias;
        const State target = to_goal ? problem.goals[rng.uniform_index(problem.goals.size())]
                                     : sample_state(rng, problem.space);
        const std::uint32_t nearest = tree.nearest(target);
        const double dist = tree.distance(nearest, target);
        if (dist == 0.0) {
            continue;
        }
        const State fresh = steer(tree.state(nearest), target, max_len, dist);

        const double radius = std::min(
            rgg_radius(n, std::max<std::size_t>(tree.size(), 2), space_measure, config.eta),
            max_len);
        tree.near(fresh, radius, near);

        // Best valid parent among the near set, falling back to the nearest.
        std::uint32_t best_parent = kNoState;
        double best_cost = kInf;
        std::sort(near.begin(), near.end(), [&](std::uint32_t a, std::uint32_t b) {
            return tree.g(a) + tree.distance(a, fresh) < tree.g(b) + tree.distance(b, fresh);
        });
        for (const std::uint32_t y : near) {
            const double through = tree.g(y) + tree.distance(y, fresh);
            if (best_parent != kNoState && through >= best_cost) {
                break;
            }
            if (oracle.is_valid_motion(tree.state(y), fresh)) {
                best_parent = y;
                best_cost = through;
                break;  // near is sorted by cost-through
            }
        }
        if (best_parent == kNoState) {
            if (!oracle.is_valid_motion(tree.state(nearest), fresh)) {
                continue;
            }
            best_parent = nearest;
            best_cost = tree.g(nearest) + tree.distance(nearest, fresh);
        }
        const std::uint32_t id = tree.add(fresh, best_parent, tree.distance(best_parent, fresh));

        for (const State& goal : problem.goals) {
            if (equals_state(fresh, goal)) {
                goal_nodes.push_back(id);
            }
        }

        // Rewire the near set through the new node.
        for (const std::uint32_t y : near) {
            if (y == best_parent) {
                continue;
            }
            const double through = tree.g(id) + tree.distance(id, tree.state(y));
            if (through < tree.g(y) && oracle.is_valid_motion(tree.state(id), tree.state(y))) {
                tree.rewire(y, id, tree.distance(id, tree.state(y)));
            }
        }

        double best_goal_cost = kInf;
        std::uint32_t best_goal = kNoState;
        for (const std::uint32_t goal_node : goal_nodes) {
            if (tree.g(goal_node) < best_goal_cost) {
                best_goal_cost = tree.g(goal_node);
                best_goal = goal_node;
            }
        }
        if (best_goal_cost < c_current) {
            c_current = best_goal_cost;
            Solution solution;
            solution.cost = c_current;
            solution.time_s = clock.elapsed();
            solution.counters = snapshot_counters(oracle, tree.size(), iterations);
            std::vector<State> path = tree.path_to_root(best_goal);
            std::reverse(path.begin(), path.end());
            solution.path = std::move(path);
            result.events.push_back(TraceEvent{solution.time_s, oracle.num_interpolated_states(),
                                               c_current, solution.counters});
            result.best = std::move(solution);
        }
    }
    result.counters = snapshot_counters(oracle, tree.size(), iterations);
    return result;
}

SolveResult rrt_connect_solve(const ProblemInstance& problem, ValidityOracle& oracle,
                              const RrtConfig& config, const StopCondition& stop) {
    SolveResult result;
    const TrialClock clock;
    Rng rng(config.seed);
    const double max_len = resolve_max_edge_length(config, problem.space.dimension());

    SampleTree start_tree(problem.space.dimension());
    start_tree.add(problem.start, kNoState, 0.0);
    SampleTree goal_tree(problem.space.dimension());
    for (const State& goal : problem.goals) {
        goal_tree.add(goal, kNoState, 0.0);
    }

    SampleTree* active = &start_tree;
    SampleTree* passive = &goal_tree;
    bool active_is_start = true;

    enum class Extend { kTrapped, kAdvanced, kReached };
    auto extend = [&](SampleTree& tree, std::span<const double> target,
                      std::uint32_t& new_id) -> Extend {
        const std::uint32_t nearest = tree.nearest(target);
        const double dist = tree.distance(nearest, target);
        if (dist == 0.0) {
            new_id = nearest;
            return Extend::kReached;
        }
        const State fresh = steer(tree.state(nearest), target, max_len, dist);
        if (!oracle.is_valid_motion(tree.state(nearest), fresh)) {
            return Extend::kTrapped;
        }
        new_id = tree.add(fresh, nearest, c_hat(tree.state(nearest), fresh));
        return equals_state(fresh, target) ? Extend::kReached : Extend::kAdvanced;
    };

    std::uint64_t iterations = 0;
    while (!stop_reached(stop, clock, oracle, iterations, kInf)) {
        ++iterations;
        const State target = sample_state(rng, problem.space);
        std::uint32_t new_id = kNoState;
        if (extend(*active, target, new_id) != Extend::kTrapped) {
            const State meet(active->state(new_id).begin(), active->state(new_id).end());
            Extend status = Extend::kAdvanced;
            std::uint32_t connect_id = kNoState;
            while (status == Extend::kAdvanced &&
                   !stop_reached(stop, clock, oracle, iterations, kInf)) {
                status = extend(*passive, meet, connect_id);
            }
            if (status == Extend::kReached) {
                SampleTree& s_tree = active_is_start ? *active : *passive;
                SampleTree& g_tree = active_is_start ? *passive : *active;
                const std::uint32_t s_meet = active_is_start ? new_id : connect_id;
                const std::uint32_t g_meet = active_is_start ? connect_id : new_id;

                std::vector<State> path = s_tree.path_to_root(s_meet);
                std::reverse(path.begin(), path.end());
                std::vector<State> tail = g_tree.path_to_root(g_meet);
                // The meeting state appears in both trees; drop one copy.
                path.insert(path.end(), tail.begin() + 1, tail.end());

                double cost = 0.0;
                for (std::size_t i = 1; i < path.size(); ++i) {
                    cost += c_hat(path[i - 1], path[i]);
                }
                Solution solution;
                solution.cost = cost;
                solution.time_s = clock.elapsed();
                solution.counters = snapshot_counters(
                    oracle, start_tree.size() + goal_tree.size(), iterations);
                solution.path = std::move(path);
                result.events.push_back(TraceEvent{solution.time_s,
                                                   oracle.num_interpolated_states(), cost,
                                                   solution.counters});
                result.best = std::move(solution);
                result.counters = snapshot_counters(
                    oracle, start_tree.size() + goal_tree.size(), iterations);
                return result;
            }
        }
        std::swap(active, passive);
        active_is_start = !active_is_start;
    }
    result.counters =
        snapshot_counters(oracle, start_tree.size() + goal_tree.size(), iterations);
    return result;
}

}  // namespace aitstar
