#pragma once

#include <cstdint>
#include <vector>

namespace aitstar {

// Static kd-tree over a subset of row-major points, rebuilt per batch.
// Exact radius queries. The tree stores ids and split values only; the point
// buffer is passed into each call, which keeps the structure safely copyable.
class KdTree {
  public:
    KdTree() = default;

    // ids index into points (point i at points + i*n).
    void build(const double* points, std::size_t n, std::vector<std::uint32_t> ids);

    // Appends all ids within radius of query (inclusive), unsorted. points
    // must be the same buffer contents the tree was built from.
    void radius_query(const double* points, const double* query, double radius,
                      std::vector<std::uint32_t>& out) const;

    std::size_t size() const { return ids_.size(); }

  private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;       // leaf when right == 0
        std::uint32_t right = 0;     // index of right child; left child is adjacent
        std::uint32_t split_dim = 0;
        double split_value = 0.0;
    };

    std::uint32_t build_node(const double* points, std::uint32_t begin, std::uint32_t end);
    void query_node(std::uint32_t node, const double* points, const double* query,
                    double radius_sq, std::vector<std::uint32_t>& out) const;

    static constexpr std::uint32_t kLeafSize = 16;

    std::size_t dim_ = 0;
    std::vector<std::uint32_t> ids_;
    std::vector<Node> nodes_;
};

}  // namespace aitstar
