#include "aitstar/forward_queue.hpp"

#include <algorithm>

namespace aitstar {

bool ForwardQueue::less(const Entry& a, const Entry& b) const {
    if (a.key.k1 != b.key.k1) {
        return a.key.k1 < b.key.k1;
    }
    if (a.key.k2 != b.key.k2) {
        return a.key.k2 < b.key.k2;
    }
    if (a.key.k3 != b.key.k3) {
        return a.key.k3 < b.key.k3;
    }
    if (a.parent != b.parent) {
        return a.parent < b.parent;
    }
    return a.child < b.child;
}

void ForwardQueue::sift_up(std::size_t i) {
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!less(heap_[i], heap_[parent])) {
            break;
        }
        std::swap(heap_[i], heap_[parent]);
        pos_[code(heap_[i].parent, heap_[i].child)] = static_cast<std::uint32_t>(i);
        pos_[code(heap_[parent].parent, heap_[parent].child)] = static_cast<std::uint32_t>(parent);
        i = parent;
    }
}

void ForwardQueue::sift_down(std::size_t i) {
    const std::size_t size = heap_.size();
    while (true) {
        std::size_t best = i;
        const std::size_t left = 2 * i + 1;
        const std::size_t right = 2 * i + 2;
        if (left < size && less(heap_[left], heap_[best])) {
            best = left;
        }
        if (right < size && less(heap_[right], heap_[best])) {
            best = right;
        }
        if (best == i) {
            break;
        }
        std::swap(heap_[i], heap_[best]);
        pos_[code(heap_[i].parent, heap_[i].child)] = static_cast<std::uint32_t>(i);
        pos_[code(heap_[best].parent, heap_[best].child)] = static_cast<std::uint32_t>(best);
        i = best;
    }
}

void ForwardQueue::set_key(std::size_t pos, const ForwardKey& key) {
    heap_[pos].key = key;
    sift_up(pos);
    sift_down(pos_[code(heap_[pos].parent, heap_[pos].child)]);
}

void ForwardQueue::push(StateId parent, StateId child, const ForwardKey& key) {
    const std::uint64_t edge = code(parent, child);
    const auto it = pos_.find(edge);
    if (it != pos_.end()) {
        // Keep the smaller stored key; stored keys must stay lower bounds.
        if (key < heap_[it->second].key) {
            set_key(it->second, key);
        }
        return;
    }
    heap_.push_back(Entry{key, parent, child});
    pos_[edge] = static_cast<std::uint32_t>(heap_.size() - 1);
    sift_up(heap_.size() - 1);
    out_[parent].push_back(child);
    in_[child].push_back(parent);
    if (tally_ != nullptr) {
        tally_->on_edge_added(parent, child);
    }
}

void ForwardQueue::remove_at(std::size_t pos) {
    const Entry entry = heap_[pos];
    const std::size_t last = heap_.size() - 1;
    if (pos != last) {
        heap_[pos] = heap_[last];
        pos_[code(heap_[pos].parent, heap_[pos].child)] = static_cast<std::uint32_t>(pos);
    }
    heap_.pop_back();
    pos_.erase(code(entry.parent, entry.child));
    if (pos < heap_.size()) {
        sift_up(pos);
        sift_down(pos_[code(heap_[pos].parent, heap_[pos].child)]);
    }
    auto& children = out_[entry.parent];
    children.erase(std::find(children.begin(), children.end(), entry.child));
    if (children.empty()) {
        out_.erase(entry.parent);
    }
    auto& parents = in_[entry.child];
    parents.erase(std::find(parents.begin(), parents.end(), entry.parent));
    if (parents.empty()) {
        in_.erase(entry.child);
    }
    if (tally_ != nullptr) {
        tally_->on_edge_removed(entry.parent, entry.child);
    }
}

std::optional<std::pair<DirectedEdge, ForwardKey>> ForwardQueue::pop_best(const KeyFn& key_fn) {
    while (!heap_.empty()) {
        const Entry top = heap_.front();
        const ForwardKey current = key_fn(top.parent, top.child);
        Entry refreshed{current, top.parent, top.child};
        // The stored key is a lower bound; if the recomputed key still beats
        // every other stored bound, this edge is the true minimum.
        bool is_min = heap_.size() == 1;
        if (!is_min) {
            const std::size_t left = 1;
            const std::size_t right = 2;
            const Entry* next = &heap_[left];
            if (right < heap_.size() && less(heap_[right], heap_[left])) {
                next = &heap_[right];
            }
            is_min = !less(*next, refreshed);
        }
        if (is_min) {
            remove_at(0);
            return std::make_pair(DirectedEdge{top.parent, top.child}, current);
        }
        set_key(0, current);
    }
    return std::nullopt;
}

void ForwardQueue::refresh_parent(StateId parent, const KeyFn& key_fn) {
    const auto it = out_.find(parent);
    if (it == out_.end()) {
        return;
    }
    const std::vector<StateId> children = it->second;
    for (const StateId child : children) {
        const auto pos_it = pos_.find(code(parent, child));
        if (pos_it != pos_.end()) {
            set_key(pos_it->second, key_fn(parent, child));
        }
    }
}

void ForwardQueue::refresh_child(StateId child, const KeyFn& key_fn) {
    const auto it = in_.find(child);
    if (it == in_.end()) {
        return;
    }
    const std::vector<StateId> parents = it->second;
    for (const StateId parent : parents) {
        const auto pos_it = pos_.find(code(parent, child));
        if (pos_it != pos_.end()) {
            set_key(pos_it->second, key_fn(parent, child));
        }
    }
}

void ForwardQueue::rekey_all(const KeyFn& key_fn) {
    for (Entry& entry : heap_) {
        entry.key = key_fn(entry.parent, entry.child);
    }
    for (std::size_t i = heap_.size(); i-- > 0;) {
        sift_down(i);
    }
    for (std::size_t i = 0; i < heap_.size(); ++i) {
        pos_[code(heap_[i].parent, heap_[i].child)] = static_cast<std::uint32_t>(i);
    }
}

void ForwardQueue::clear() {
    if (tally_ != nullptr) {
        tally_->clear_edges();
    }
    heap_.clear();
    pos_.clear();
    out_.clear();
    in_.clear();
}

}  // namespace aitstar
