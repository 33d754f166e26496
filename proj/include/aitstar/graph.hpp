#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_set>
#include <vector>

#include "aitstar/kdtree.hpp"
#include "aitstar/space.hpp"

namespace aitstar {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = 0xFFFFFFFFu;

struct DirectedEdge {
    StateId parent = kNoState;
    StateId child = kNoState;
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

// The sampled approximation: states with stable identifiers, the radius
// neighbor index, the invalid-edge registry, and both search trees.
// Identifiers are never reused; pruned states keep their id but stop being
// returned by queries. Value semantics throughout, so snapshots for
// cross-checking are plain copies.
class Graph {
  public:
    explicit Graph(const ProblemInstance& problem);

    std::size_t dimension() const { return dim_; }
    StateId start_id() const { return 0; }
    const std::vector<StateId>& goal_ids() const { return goal_ids_; }
    bool is_goal(StateId id) const { return is_goal_[id]; }

    std::span<const double> state(StateId id) const {
        return {coords_.data() + static_cast<std::size_t>(id) * dim_, dim_};
    }
    double distance(StateId a, StateId b) const;
    double g_hat(StateId id) const { return g_hat_[id]; }
    double h_hat_apriori(StateId id) const { return h_hat_[id]; }
    double f_hat(StateId id) const { return g_hat_[id] + h_hat_[id]; }

    std::size_t capacity() const { return alive_.size(); }
    bool alive(StateId id) const { return alive_[id] != 0; }
    std::size_t num_samples() const { return num_alive_; }
    std::vector<StateId> alive_ids() const;

    // Validity-filters the states (invalid ones are discarded and get no id)
    // and returns the identifiers of the inserted ones. The spatial index is
    // not updated until rebuild_index().
    std::vector<StateId> add_samples(std::span<const State> states, StateValidator& validator);

    // Removes samples that cannot improve a solution of cost c_current and
    // are neither tree members nor start/goal; forward-tree vertices beyond
    // the bound are removed with their subtrees. Returns removed sample ids.
    std::vector<StateId> prune(double c_current);

    void set_radius(double r) { radius_ = r; }
    double radius() const { return radius_; }
    void rebuild_index();

    // Number of current samples in the informed set (start and goals count).
    std::size_t informed_count(double c_current) const;

    // RGG neighbors: radius query, plus tree parents/children, minus the
    // state itself and blacklisted pairs. Sorted by id.
    std::vector<StateId> neighbors(StateId x) const;
    // Allocation-free variant; visits each neighbor exactly once, radius
    // neighbors in id order first, then tree-only neighbors.
    void for_each_neighbor(StateId x, const std::function<void(StateId)>& fn) const;

    // Outgoing candidate edges (x, y) in id-sorted order.
    std::vector<DirectedEdge> expand(StateId x) const;

    // Forward tree.
    double g(StateId id) const { return g_[id]; }
    bool in_forward_tree(StateId id) const { return id == start_id() || f_parent_[id] != kNoState; }
    StateId f_parent(StateId id) const { return f_parent_[id]; }
    const std::vector<StateId>& f_children(StateId id) const { return f_children_[id]; }
    double f_edge_cost(StateId child) const { return f_edge_cost_[child]; }

    // Inserts or rewires (parent, child) with the evaluated edge cost and
    // immediately recomputes cost-to-come for the child's whole subtree.
    // Appends every vertex whose g changed to g_changed.
    void f_set_edge(StateId parent, StateId child, double true_cost,
                    std::vector<StateId>& g_changed);

    // Reverse tree (edges may cross invalid space).
    StateId r_parent(StateId id) const { return r_parent_[id]; }
    const std::vector<StateId>& r_children(StateId id) const { return r_children_[id]; }
    void r_set_parent(StateId child, StateId parent);
    void clear_reverse_tree();

    // Invalid-edge registry; (a, b) and (b, a) are the same entry.
    void add_invalid_edge(StateId a, StateId b);
    bool is_invalid_edge(StateId a, StateId b) const;
    std::size_t num_invalid_edges() const { return invalid_edges_.size(); }

    // Line-oriented debug dump: states, tree edges, blacklist.
    void dump(std::ostream& out) const;

  private:
    StateId insert_state(std::span<const double> x);
    void cache_neighbors(StateId x) const;

    std::size_t dim_;
    std::vector<double> coords_;
    std::vector<double> g_hat_;
    std::vector<double> h_hat_;
    std::vector<char> alive_;
    std::vector<char> is_goal_;
    std::size_t num_alive_ = 0;
    std::vector<StateId> goal_ids_;

    std::vector<double> g_;
    std::vector<StateId> f_parent_;
    std::vector<std::vector<StateId>> f_children_;
    std::vector<double> f_edge_cost_;

    std::vector<StateId> r_parent_;
    std::vector<std::vector<StateId>> r_children_;

    std::unordered_set<std::uint64_t> invalid_edges_;

    KdTree index_;
    double radius_ = kInf;
    mutable std::vector<std::vector<StateId>> radius_cache_;
    mutable std::vector<char> radius_cache_valid_;
};

}  // namespace aitstar
