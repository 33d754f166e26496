#include "aitstar/kdtree.hpp"

#include <algorithm>
#include <cmath>

#include "aitstar/kernels.hpp"

namespace aitstar {

void KdTree::build(const double* points, std::size_t n, std::vector<std::uint32_t> ids) {
    dim_ = n;
    ids_ = std::move(ids);
    nodes_.clear();
    if (!ids_.empty()) {
        nodes_.reserve(2 * ids_.size() / kLeafSize + 2);
        build_node(points, 0, static_cast<std::uint32_t>(ids_.size()));
    }
}

std::uint32_t KdTree::build_node(const double* points, std::uint32_t begin, std::uint32_t end) {
    const std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, 0, 0, 0.0});
    if (end - begin <= kLeafSize) {
        return index;
    }

    // Split along the dimension with the widest spread at the median point.
    std::uint32_t split_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        double lo = points[ids_[begin] * dim_ + d];
        double hi = lo;
        for (std::uint32_t i = begin + 1; i < end; ++i) {
            const double v = points[ids_[i] * dim_ + d];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            split_dim = static_cast<std::uint32_t>(d);
        }
    }
    if (best_spread <= 0.0) {
        return index;  // all points coincide; keep as leaf
    }

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return points[a * dim_ + split_dim] < points[b * dim_ + split_dim];
                     });
    const double split_value = points[ids_[mid] * dim_ + split_dim];

    nodes_[index].split_dim = split_dim;
    nodes_[index].split_value = split_value;
    build_node(points, begin, mid);
    nodes_[index].right = build_node(points, mid, end);
    return index;
}

void KdTree::radius_query(const double* points, const double* query, double radius,
                          std::vector<std::uint32_t>& out) const {
    if (ids_.empty()) {
        return;
    }
    query_node(0, points, query, radius * radius, out);
}

void KdTree::query_node(std::uint32_t node_index, const double* points, const double* query,
                        double radius_sq, std::vector<std::uint32_t>& out) const {
    const Node& node = nodes_[node_index];
    if (node.right == 0) {
        const auto& distance = kernels::ops().squared_distance;
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            if (distance(query, points + ids_[i] * dim_, dim_) <= radius_sq) {
                out.push_back(ids_[i]);
            }
        }
        return;
    }
    const double delta = query[node.split_dim] - node.split_value;
    // Points equal to the split value can land on either side of the
    // partition, so recurse into both subtrees when the slab is within reach.
    if (delta <= 0.0 || delta * delta <= radius_sq) {
        query_node(node_index + 1, points, query, radius_sq, out);
    }
    if (delta >= 0.0 || delta * delta <= radius_sq) {
        query_node(node.right, points, query, radius_sq, out);
    }
}

}  // namespace aitstar
