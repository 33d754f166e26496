#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "aitstar/graph.hpp"
#include "aitstar/reverse_search.hpp"

namespace aitstar {

// Lexicographic edge key of the forward search.
struct ForwardKey {
    double k1 = kInf;  // g(parent) + c_hat + h(child)
    double k2 = kInf;  // g(parent) + c_hat
    double k3 = kInf;  // g(parent)
};

inline bool operator<(const ForwardKey& a, const ForwardKey& b) {
    if (a.k1 != b.k1) {
        return a.k1 < b.k1;
    }
    if (a.k2 != b.k2) {
        return a.k2 < b.k2;
    }
    return a.k3 < b.k3;
}

// Edge queue of the forward search. One entry per directed edge; stored keys
// may go stale when the heuristic is repaired or the tree rewired, but are
// kept as lower bounds of the current keys (refresh_parent handles
// cost-to-come drops, repairs only raise the heuristic term), so the lazy
// recompute-on-pop returns the edge with the minimal current key.
class ForwardQueue {
  public:
    using KeyFn = std::function<ForwardKey(StateId, StateId)>;

    void set_tally(UnprocessedTally* tally) { tally_ = tally; }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    // Inserts the edge, or lowers the stored key of an existing entry.
    void push(StateId parent, StateId child, const ForwardKey& key);

    // Pops the edge whose recomputed key is minimal, together with that key.
    std::optional<std::pair<DirectedEdge, ForwardKey>> pop_best(const KeyFn& key_fn);

    // Recomputes stored keys of all queued out-edges of parent after its
    // cost-to-come changed.
    void refresh_parent(StateId parent, const KeyFn& key_fn);

    // Recomputes stored keys of all queued in-edges of child after its
    // heuristic value dropped.
    void refresh_child(StateId child, const KeyFn& key_fn);

    // Recomputes every stored key (used after heuristic restarts).
    void rekey_all(const KeyFn& key_fn);

    void clear();

  private:
    struct Entry {
        ForwardKey key;
        StateId parent;
        StateId child;
    };

    static std::uint64_t code(StateId parent, StateId child) {
        return (static_cast<std::uint64_t>(parent) << 32) | child;
    }
    bool less(const Entry& a, const Entry& b) const;
    void sift_up(std::size_t i);
    void sift_down(std::size_t i);
    void set_key(std::size_t pos, const ForwardKey& key);
    void remove_at(std::size_t pos);

    std::vector<Entry> heap_;
    std::unordered_map<std::uint64_t, std::uint32_t> pos_;  // edge code -> heap index
    std::unordered_map<StateId, std::vector<StateId>> out_;
    std::unordered_map<StateId, std::vector<StateId>> in_;
    UnprocessedTally* tally_ = nullptr;
};

}  // namespace aitstar
