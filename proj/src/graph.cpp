#include "aitstar/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "aitstar/kernels.hpp"

namespace aitstar {
namespace {

std::uint64_t edge_code(StateId a, StateId b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

void sorted_insert(std::vector<StateId>& v, StateId id) {
    const auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it == v.end() || *it != id) {
        v.insert(it, id);
    }
}

void sorted_erase(std::vector<StateId>& v, StateId id) {
    const auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it != v.end() && *it == id) {
        v.erase(it);
    }
}

}  // namespace

Graph::Graph(const ProblemInstance& problem) : dim_(problem.space.dimension()) {
    insert_state(problem.start);
    for (const State& goal : problem.goals) {
        const StateId id = insert_state(goal);
        goal_ids_.push_back(id);
        is_goal_[id] = 1;
        h_hat_[id] = 0.0;  // exact for goals regardless of rounding
    }
    g_[0] = 0.0;
}

StateId Graph::insert_state(std::span<const double> x) {
    const StateId id = static_cast<StateId>(alive_.size());
    coords_.insert(coords_.end(), x.begin(), x.end());
    alive_.push_back(1);
    is_goal_.push_back(0);
    ++num_alive_;
    g_.push_back(kInf);
    f_parent_.push_back(kNoState);
    f_children_.emplace_back();
    f_edge_cost_.push_back(kInf);
    r_parent_.push_back(kNoState);
    r_children_.emplace_back();
    radius_cache_.emplace_back();
    radius_cache_valid_.push_back(0);

    const double to_start = id == 0 ? 0.0 : distance(0, id);
    g_hat_.push_back(to_start);
    double to_goal = kInf;
    for (const StateId goal : goal_ids_) {
        to_goal = std::min(to_goal, distance(goal, id));
    }
    h_hat_.push_back(goal_ids_.empty() ? kInf : to_goal);
    return id;
}

double Graph::distance(StateId a, StateId b) const {
    return std::sqrt(kernels::ops().squared_distance(coords_.data() + std::size_t(a) * dim_,
                                                     coords_.data() + std::size_t(b) * dim_,
                                                     dim_));
}

std::vector<StateId> Graph::alive_ids() const {
    std::vector<StateId> ids;
    ids.reserve(num_alive_);
    for (StateId id = 0; id < alive_.size(); ++id) {
        if (alive_[id]) {
            ids.push_back(id);
        }
    }
    return ids;
}

std::vector<StateId> Graph::add_samples(std::span<const State> states,
                                        StateValidator& validator) {
    std::vector<StateId> inserted;
    inserted.reserve(states.size());
    for (const State& x : states) {
        if (!validator.is_valid_state(x)) {
            continue;
        }
        inserted.push_back(insert_state(x));
    }
    return inserted;
}

std::size_t Graph::informed_count(double c_current) const {
    std::size_t count = 0;
    for (StateId id = 0; id < alive_.size(); ++id) {
        if (alive_[id] && f_hat(id) <= c_current) {
            ++count;
        }
    }
    return count;
}

std::vector<StateId> Graph::prune(double c_current) {
    // Drop tree branches that cannot improve the solution.
    std::vector<StateId> tree_stack;
    for (StateId id = 0; id < alive_.size(); ++id) {
        if (alive_[id] && in_forward_tree(id) && id != start_id() && f_hat(id) > c_current) {
            if (f_parent_[id] != kNoState && f_hat(f_parent_[id]) <= c_current) {
                tree_stack.push_back(id);  // highest pruned vertex of its branch
            }
        }
    }
    for (const StateId root : tree_stack) {
        if (f_parent_[root] == kNoState) {
            continue;  // already swept as part of an ancestor's subtree
        }
        std::vector<StateId> stack{root};
        sorted_erase(f_children_[f_parent_[root]], root);
        while (!stack.empty()) {
            const StateId v = stack.back();
            stack.pop_back();
            for (const StateId c : f_children_[v]) {
                stack.push_back(c);
            }
            f_children_[v].clear();
            f_parent_[v] = kNoState;
            f_edge_cost_[v] = kInf;
            g_[v] = kInf;
        }
    }

    // Drop unreachable samples.
    std::vector<StateId> removed;
    for (StateId id = 0; id < alive_.size(); ++id) {
        if (!alive_[id] || id == start_id() || is_goal_[id]) {
            continue;
        }
        if (!in_forward_tree(id) && f_hat(id) > c_current) {
            alive_[id] = 0;
            --num_alive_;
            removed.push_back(id);
            if (r_parent_[id] != kNoState) {
                sorted_erase(r_children_[r_parent_[id]], id);
                r_parent_[id] = kNoState;
            }
            for (const StateId c : r_children_[id]) {
                r_parent_[c] = kNoState;
            }
            r_children_[id].clear();
        }
    }
    return removed;
}

void Graph::rebuild_index() {
    index_.build(coords_.data(), dim_, alive_ids());
    for (StateId id = 0; id < alive_.size(); ++id) {
        radius_cache_valid_[id] = 0;
        radius_cache_[id].clear();
    }
}

void Graph::cache_neighbors(StateId x) const {
    if (radius_cache_valid_[x]) {
        return;
    }
    std::vector<StateId>& cache = radius_cache_[x];
    cache.clear();
    index_.radius_query(coords_.data(), coords_.data() + std::size_t(x) * dim_, radius_, cache);
    std::sort(cache.begin(), cache.end());
    sorted_erase(cache, x);
    radius_cache_valid_[x] = 1;
}

void Graph::for_each_neighbor(StateId x, const std::function<void(StateId)>& fn) const {
    cache_neighbors(x);
    const std::vector<StateId>& cache = radius_cache_[x];
    for (const StateId y : cache) {
        if (alive_[y] && !is_invalid_edge(x, y)) {
            fn(y);
        }
    }
    auto visit_tree_neighbor = [&](StateId y) {
        if (y == kNoState || y == x || !alive_[y]) {
            return;
        }
        if (std::binary_search(cache.begin(), cache.end(), y)) {
            return;  // already visited through the radius set
        }
        if (!is_invalid_edge(x, y)) {
            fn(y);
        }
    };
    visit_tree_neighbor(f_parent_[x]);
    visit_tree_neighbor(r_parent_[x]);
    for (const StateId y : f_children_[x]) {
        visit_tree_neighbor(y);
    }
    for (const StateId y : r_children_[x]) {
        visit_tree_neighbor(y);
    }
}

std::vector<StateId> Graph::neighbors(StateId x) const {
    std::vector<StateId> result;
    for_each_neighbor(x, [&](StateId y) { result.push_back(y); });
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::vector<DirectedEdge> Graph::expand(StateId x) const {
    std::vector<DirectedEdge> edges;
    for (const StateId y : neighbors(x)) {
        edges.push_back(DirectedEdge{x, y});
    }
    return edges;
}

void Graph::f_set_edge(StateId parent, StateId child, double true_cost,
                       std::vector<StateId>& g_changed) {
    if (f_parent_[child] != kNoState) {
        sorted_erase(f_children_[f_parent_[child]], child);
    }
    f_parent_[child] = parent;
    f_edge_cost_[child] = true_cost;
    sorted_insert(f_children_[parent], child);

    // Propagate the new cost-to-come through the whole affected subtree.
    std::vector<StateId> stack{child};
    g_[child] = g_[parent] + true_cost;
    g_changed.push_back(child);
    while (!stack.empty()) {
        const StateId v = stack.back();
        stack.pop_back();
        for (const StateId c : f_children_[v]) {
            g_[c] = g_[v] + f_edge_cost_[c];
            g_changed.push_back(c);
            stack.push_back(c);
        }
    }
}

void Graph::r_set_parent(StateId child, StateId parent) {
    if (r_parent_[child] == parent) {
        return;
    }
    if (r_parent_[child] != kNoState) {
        sorted_erase(r_children_[r_parent_[child]], child);
    }
    r_parent_[child] = parent;
    if (parent != kNoState) {
        sorted_insert(r_children_[parent], child);
    }
}

void Graph::clear_reverse_tree() {
    for (StateId id = 0; id < alive_.size(); ++id) {
        r_parent_[id] = kNoState;
        r_children_[id].clear();
    }
}

void Graph::add_invalid_edge(StateId a, StateId b) {
    invalid_edges_.insert(edge_code(a, b));
}

bool Graph::is_invalid_edge(StateId a, StateId b) const {
    return invalid_edges_.contains(edge_code(a, b));
}

void Graph::dump(std::ostream& out) const {
    char buf[32];
    for (StateId id = 0; id < alive_.size(); ++id) {
        out << "state " << id << ' ' << (alive_[id] ? 1 : 0);
        const auto x = state(id);
        for (const double v : x) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ' ' << buf;
        }
        out << '\n';
    }
    for (StateId id = 0; id < alive_.size(); ++id) {
        if (f_parent_[id] != kNoState) {
            std::snprintf(buf, sizeof(buf), "%.17g", f_edge_cost_[id]);
            out << "fedge " << f_parent_[id] << ' ' << id << ' ' << buf << '\n';
        }
    }
    for (StateId id = 0; id < alive_.size(); ++id) {
        if (r_parent_[id] != kNoState) {
            out << "redge " << r_parent_[id] << ' ' << id << '\n';
        }
    }
    std::vector<std::uint64_t> codes(invalid_edges_.begin(), invalid_edges_.end());
    std::sort(codes.begin(), codes.end());
    for (const std::uint64_t code : codes) {
        out << "invalid " << (code >> 32) << ' ' << (code & 0xFFFFFFFFu) << '\n';
    }
}

}  // namespace aitstar
