#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aitstar/graph.hpp"

namespace aitstar {

// Lexicographic vertex key of the reverse search.
struct ReverseKey {
    double k1 = kInf;  // min(h_con, h_exp) + g_hat
    double k2 = kInf;  // min(h_con, h_exp)
};

inline bool operator<(const ReverseKey& a, const ReverseKey& b) {
    if (a.k1 != b.k1) {
        return a.k1 < b.k1;
    }
    return a.k2 < b.k2;
}

// Bookkeeping shared between the forward queue and the reverse search for
// the suspension condition "the forward queue contains an edge with an
// unprocessed vertex". Tracks, in O(1), whether any queued edge has an
// endpoint that is inconsistent in the reverse search.
class UnprocessedTally {
  public:
    void ensure_capacity(std::size_t capacity);
    void clear_edges();
    void reset_flags();
    void on_edge_added(StateId parent, StateId child);
    void on_edge_removed(StateId parent, StateId child);
    void set_inconsistent(StateId id, bool inconsistent);
    bool any_unprocessed() const { return total_ > 0; }

  private:
    std::vector<std::uint32_t> incident_;
    std::vector<char> inconsistent_;
    std::int64_t total_ = 0;
};

// LPA*-based lazy reverse search. Computes the adaptive cost-to-go
// heuristic on the current approximation and repairs it incrementally when
// the forward search reports invalid edges. Labels live here; the reverse
// tree adjacency lives in the Graph. Copyable for cross-checks; copies drop
// the tally hook.
class ReverseSearch {
  public:
    ReverseSearch() = default;
    ReverseSearch(const ReverseSearch& other);
    ReverseSearch& operator=(const ReverseSearch& other);
    ReverseSearch(ReverseSearch&&) = default;
    ReverseSearch& operator=(ReverseSearch&&) = default;

    void set_tally(UnprocessedTally* tally) { tally_ = tally; }

    // Called whenever a state's connection label decreases; the planner uses
    // it to rekey queued forward edges into that state. Copies drop the hook.
    void set_label_drop_hook(std::function<void(StateId)> hook) {
        label_drop_hook_ = std::move(hook);
    }

    double h_con(StateId id) const { return id < h_con_.size() ? h_con_[id] : kInf; }
    double h_exp(StateId id) const { return id < h_exp_.size() ? h_exp_[id] : kInf; }
    bool is_inconsistent(StateId id) const { return h_con(id) != h_exp(id); }
    ReverseKey key_of(const Graph& graph, StateId id) const;

    // Resets all labels to infinity, roots the search at the goals, and
    // clears the reverse tree.
    void restart(Graph& graph);

    // Registers a failed edge and updates both endpoint labels; the repair
    // itself happens in the next run call.
    void handle_invalid_edge(Graph& graph, StateId parent, StateId child);

    // The suspendable search loop. Runs while the minimum queue key is below
    // the start key, the start is expanded below its connection label, or
    // forward_pending() reports a queued forward edge with an unprocessed
    // vertex. Always stops on an empty queue.
    void run(Graph& graph, const std::function<bool()>& forward_pending);

    // Test mode: ignores the suspension conditions and drains the queue.
    void run_to_quiescence(Graph& graph);

    // Spec-shaped wrapper: restart-and-run without an edge, repair-and-run
    // with one.
    void update_heuristic(Graph& graph, std::optional<DirectedEdge> invalid_edge,
                          const std::function<bool()>& forward_pending = nullptr);

    void on_states_removed(Graph& graph, std::span<const StateId> removed);

    std::uint64_t num_expansions() const { return num_expansions_; }
    bool queue_empty() const { return heap_.empty(); }
    std::size_t queue_size() const { return heap_.size(); }

    // Debug check of the LPA* invariant: the queue contains exactly the
    // inconsistent states among those with any finite label activity.
    bool queue_invariant_holds() const;

  private:
    void ensure_capacity(std::size_t capacity);
    void update_state(Graph& graph, StateId x);
    void expand_top(Graph& graph);
    bool loop_should_continue(const Graph& graph,
                              const std::function<bool()>& forward_pending) const;

    // Indexed binary min-heap over states keyed by (k1, k2, id).
    struct HeapEntry {
        ReverseKey key;
        StateId id;
    };
    bool heap_less(const HeapEntry& a, const HeapEntry& b) const;
    void heap_sift_up(std::size_t i);
    void heap_sift_down(std::size_t i);
    void heap_insert_or_update(StateId id, const ReverseKey& key);
    void heap_remove(StateId id);
    HeapEntry heap_pop();

    std::vector<double> h_con_;
    std::vector<double> h_exp_;
    std::vector<HeapEntry> heap_;
    std::vector<std::uint32_t> heap_pos_;
    std::uint64_t num_expansions_ = 0;
    UnprocessedTally* tally_ = nullptr;
    std::function<void(StateId)> label_drop_hook_;
};

}  // namespace aitstar
