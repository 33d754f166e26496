#include "aitstar/reverse_search.hpp"

#include <algorithm>
#include <cmath>

namespace aitstar {

namespace {
constexpr std::uint32_t kNotInHeap = 0xFFFFFFFFu;
}

void UnprocessedTally::ensure_capacity(std::size_t capacity) {
    if (incident_.size() < capacity) {
        incident_.resize(capacity, 0);
        inconsistent_.resize(capacity, 0);
    }
}

void UnprocessedTally::clear_edges() {
    std::fill(incident_.begin(), incident_.end(), 0);
    total_ = 0;
}

void UnprocessedTally::reset_flags() {
    std::fill(inconsistent_.begin(), inconsistent_.end(), 0);
    total_ = 0;
}

void UnprocessedTally::on_edge_added(StateId parent, StateId child) {
    ensure_capacity(std::max(parent, child) + 1);
    for (const StateId id : {parent, child}) {
        ++incident_[id];
        if (inconsistent_[id]) {
            ++total_;
        }
    }
}

void UnprocessedTally::on_edge_removed(StateId parent, StateId child) {
    for (const StateId id : {parent, child}) {
        --incident_[id];
        if (inconsistent_[id]) {
            --total_;
        }
    }
}

void UnprocessedTally::set_inconsistent(StateId id, bool inconsistent) {
    ensure_capacity(id + 1);
    if (inconsistent_[id] == static_cast<char>(inconsistent)) {
        return;
    }
    inconsistent_[id] = static_cast<char>(inconsistent);
    total_ += inconsistent ? incident_[id] : -static_cast<std::int64_t>(incident_[id]);
}

ReverseSearch::ReverseSearch(const ReverseSearch& other)
    : h_con_(other.h_con_),
      h_exp_(other.h_exp_),
      heap_(other.heap_),
      heap_pos_(other.heap_pos_),
      num_expansions_(other.num_expansions_),
      tally_(nullptr),
      label_drop_hook_(nullptr) {}

ReverseSearch& ReverseSearch::operator=(const ReverseSearch& other) {
    if (this != &other) {
        h_con_ = other.h_con_;
        h_exp_ = other.h_exp_;
        heap_ = other.heap_;
        heap_pos_ = other.heap_pos_;
        num_expansions_ = other.num_expansions_;
        tally_ = nullptr;
        label_drop_hook_ = nullptr;
    }
    return *this;
}

void ReverseSearch::ensure_capacity(std::size_t capacity) {
    if (h_con_.size() < capacity) {
        h_con_.resize(capacity, kInf);
        h_exp_.resize(capacity, kInf);
        heap_pos_.resize(capacity, kNotInHeap);
    }
    if (tally_ != nullptr) {
        tally_->ensure_capacity(capacity);
    }
}

ReverseKey ReverseSearch::key_of(const Graph& graph, StateId id) const {
    const double label = std::min(h_con(id), h_exp(id));
    return ReverseKey{label + graph.g_hat(id), label};
}

bool ReverseSearch::heap_less(const HeapEntry& a, const HeapEntry& b) const {
    if (a.key.k1 != b.key.k1) {
        return a.key.k1 < b.key.k1;
    }
    if (a.key.k2 != b.key.k2) {
        return a.key.k2 < b.key.k2;
    }
    return a.id < b.id;
}

void ReverseSearch::heap_sift_up(std::size_t i) {
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!heap_less(heap_[i], heap_[parent])) {
            break;
        }
        std::swap(heap_[i], heap_[parent]);
        heap_pos_[heap_[i].id] = static_cast<std::uint32_t>(i);
        heap_pos_[heap_[parent].id] = static_cast<std::uint32_t>(parent);
        i = parent;
    }
}

void ReverseSearch::heap_sift_down(std::size_t i) {
    const std::size_t size = heap_.size();
    while (true) {
        std::size_t best = i;
        const std::size_t left = 2 * i + 1;
        const std::size_t right = 2 * i + 2;
        if (left < size && heap_less(heap_[left], heap_[best])) {
            best = left;
        }
        if (right < size && heap_less(heap_[right], heap_[best])) {
            best = right;
        }
        if (best == i) {
            break;
        }
        std::swap(heap_[i], heap_[best]);
        heap_pos_[heap_[i].id] = static_cast<std::uint32_t>(i);
        heap_pos_[heap_[best].id] = static_cast<std::uint32_t>(best);
        i = best;
    }
}

void ReverseSearch::heap_insert_or_update(StateId id, const ReverseKey& key) {
    const std::uint32_t pos = heap_pos_[id];
    if (pos == kNotInHeap) {
        heap_.push_back(HeapEntry{key, id});
        heap_pos_[id] = static_cast<std::uint32_t>(heap_.size() - 1);
        heap_sift_up(heap_.size() - 1);
        return;
    }
    heap_[pos].key = key;
    heap_sift_up(pos);
    heap_sift_down(heap_pos_[id]);
}

void ReverseSearch::heap_remove(StateId id) {
    const std::uint32_t pos = heap_pos_[id];
    if (pos == kNotInHeap) {
        return;
    }
    const std::size_t last = heap_.size() - 1;
    if (pos != last) {
        heap_[pos] = heap_[last];
        heap_pos_[heap_[pos].id] = pos;
    }
    heap_.pop_back();
    heap_pos_[id] = kNotInHeap;
    if (pos < heap_.size()) {
        heap_sift_up(pos);
        heap_sift_down(heap_pos_[heap_[pos].id]);
    }
}

ReverseSearch::HeapEntry ReverseSearch::heap_pop() {
    HeapEntry top = heap_.front();
    heap_remove(top.id);
    return top;
}

void ReverseSearch::restart(Graph& graph) {
    ensure_capacity(graph.capacity());
    std::fill(h_con_.begin(), h_con_.end(), kInf);
    std::fill(h_exp_.begin(), h_exp_.end(), kInf);
    for (const HeapEntry& entry : heap_) {
        heap_pos_[entry.id] = kNotInHeap;
    }
    heap_.clear();
    graph.clear_reverse_tree();
    if (tally_ != nullptr) {
        tally_->reset_flags();
    }
    for (const StateId goal : graph.goal_ids()) {
        if (!graph.alive(goal)) {
            continue;
        }
        h_con_[goal] = 0.0;
        heap_insert_or_update(goal, key_of(graph, goal));
        if (tally_ != nullptr) {
            tally_->set_inconsistent(goal, true);
        }
    }
}

void ReverseSearch::update_state(Graph& graph, StateId x) {
    // Goals are the roots of the reverse search; their cost-to-go stays 0.
    if (graph.is_goal(x)) {
        return;
    }
    ensure_capacity(graph.capacity());

    double best_cost = kInf;
    StateId best_parent = kNoState;
    graph.for_each_neighbor(x, [&](StateId y) {
        const double candidate = h_exp(y) + graph.distance(y, x);
        if (candidate < best_cost) {
            best_cost = candidate;
            best_parent = y;
        }
    });

    const bool dropped = best_cost < h_con_[x];
    h_con_[x] = best_cost;
    graph.r_set_parent(x, std::isfinite(best_cost) ? best_parent : kNoState);
    if (dropped && label_drop_hook_) {
        label_drop_hook_(x);
    }

    const bool inconsistent = h_con_[x] != h_exp_[x];
    if (inconsistent) {
        heap_insert_or_update(x, key_of(graph, x));
    } else {
        heap_remove(x);
    }
    if (tally_ != nullptr) {
        tally_->set_inconsistent(x, inconsistent);
    }
}

void ReverseSearch::handle_invalid_edge(Graph& graph, StateId parent, StateId child) {
    graph.add_invalid_edge(parent, child);
    // Either endpoint may have been labeled through the failed edge.
    update_state(graph, parent);
    update_state(graph, child);
}

bool ReverseSearch::loop_should_continue(const Graph& graph,
                                         const std::function<bool()>& forward_pending) const {
    if (heap_.empty()) {
        return false;
    }
    const StateId start = graph.start_id();
    const ReverseKey start_key = key_of(graph, start);
    if (heap_.front().key < start_key) {
        return true;
    }
    if (h_exp(start) < h_con(start)) {
        return true;
    }
    return forward_pending && forward_pending();
}

void ReverseSearch::expand_top(Graph& graph) {
    const HeapEntry top = heap_pop();
    const StateId x = top.id;
    ++num_expansions_;
    if (h_con_[x] < h_exp_[x]) {
        h_exp_[x] = h_con_[x];
        if (tally_ != nullptr) {
            tally_->set_inconsistent(x, false);
        }
    } else {
        h_exp_[x] = kInf;
        update_state(graph, x);
    }
    graph.for_each_neighbor(x, [&](StateId y) { update_state(graph, y); });
}

void ReverseSearch::run(Graph& graph, const std::function<bool()>& forward_pending) {
    ensure_capacity(graph.capacity());
    while (loop_should_continue(graph, forward_pending)) {
        expand_top(graph);
    }
}

void ReverseSearch::run_to_quiescence(Graph& graph) {
    ensure_capacity(graph.capacity());
    while (!heap_.empty()) {
        expand_top(graph);
    }
}

void ReverseSearch::update_heuristic(Graph& graph, std::optional<DirectedEdge> invalid_edge,
                                     const std::function<bool()>& forward_pending) {
    if (invalid_edge) {
        handle_invalid_edge(graph, invalid_edge->parent, invalid_edge->child);
    } else {
        restart(graph);
    }
    run(graph, forward_pending);
}

void ReverseSearch::on_states_removed(Graph& graph, std::span<const StateId> removed) {
    (void)graph;
    for (const StateId id : removed) {
        if (id < h_con_.size()) {
            h_con_[id] = kInf;
            h_exp_[id] = kInf;
            heap_remove(id);
            if (tally_ != nullptr) {
                tally_->set_inconsistent(id, false);
            }
        }
    }
}

bool ReverseSearch::queue_invariant_holds() const {
    std::size_t inconsistent_count = 0;
    for (StateId id = 0; id < h_con_.size(); ++id) {
        if (h_con_[id] != h_exp_[id]) {
            ++inconsistent_count;
            if (heap_pos_[id] == kNotInHeap) {
                return false;
            }
        } else if (heap_pos_[id] != kNotInHeap) {
            return false;
        }
    }
    return inconsistent_count == heap_.size();
}

}  // namespace aitstar
