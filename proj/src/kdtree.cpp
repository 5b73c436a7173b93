#include "carver/kdtree.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace carver {

    KdTree::KdTree(const Instance &instance) : instance_(instance) {
        const int n = instance.num_vertices();
        std::vector<int> vertices(n);
        for (int i = 0; i < n; ++i) vertices[i] = i;
        nodes_.reserve(n);
        root_ = build(vertices, 0, n, 0);
    }

    int KdTree::build(std::vector<int> &vertices, int begin, int end, int depth) {
        if (begin >= end) return -1;
        const uint8_t axis = static_cast<uint8_t>(depth & 1);
        const int mid = begin + (end - begin) / 2;
        std::nth_element(vertices.begin() + begin, vertices.begin() + mid, vertices.begin() + end, [&](int a, int b) {
            const int64_t ca = axis == 0 ? instance_.x(a) : instance_.y(a);
            const int64_t cb = axis == 0 ? instance_.x(b) : instance_.y(b);
            return ca < cb || (ca == cb && a < b);
        });
        const int node_index = static_cast<int>(nodes_.size());
        nodes_.push_back({vertices[mid], -1, -1, axis});
        const int left = build(vertices, begin, mid, depth + 1);
        const int right = build(vertices, mid + 1, end, depth + 1);
        nodes_[node_index].left = left;
        nodes_[node_index].right = right;
        return node_index;
    }

    void KdTree::knn(int vertex, int k, std::vector<int> &out) const {
        out.clear();
        const int limit = std::min(k, instance_.num_vertices() - 1);
        if (limit <= 0) return;

        heap_.clear();
        heap_capacity_ = static_cast<size_t>(limit);
        qx_ = static_cast<double>(instance_.x(vertex));
        qy_ = static_cast<double>(instance_.y(vertex));
        query_vertex_ = vertex;

        search(root_, vertex);

        std::sort_heap(heap_.begin(), heap_.end());
        for (const auto &entry : heap_) out.push_back(entry.vertex);
    }

    void KdTree::search(int node_index, int query) const {
        const Node &node = nodes_[node_index];
        if (node.vertex != query) {
            const double dx = qx_ - static_cast<double>(instance_.x(node.vertex));
            const double dy = qy_ - static_cast<double>(instance_.y(node.vertex));
            const double cost = std::round(std::sqrt(dx * dx + dy * dy));
            const Entry candidate{cost, node.vertex};
            if (heap_.size() < heap_capacity_) {
                heap_.push_back(candidate);
                std::push_heap(heap_.begin(), heap_.end());
            } else if (candidate < heap_.front()) {
                std::pop_heap(heap_.begin(), heap_.end());
                heap_.back() = candidate;
                std::push_heap(heap_.begin(), heap_.end());
            }
        }

        const double qcoord = node.axis == 0 ? qx_ : qy_;
        const double split = static_cast<double>(node.axis == 0 ? instance_.x(node.vertex) : instance_.y(node.vertex));
        const int near = qcoord < split ? node.left : node.right;
        const int far = qcoord < split ? node.right : node.left;

        if (near >= 0) search(near, query);
        if (far >= 0) {
            // The rounded axis distance lower-bounds the rounded full distance,
            // so the far side can be pruned only on a strictly worse cost.
            const double axis_cost = std::round(std::abs(qcoord - split));
            if (heap_.size() < heap_capacity_ || axis_cost <= heap_.front().cost) {
                search(far, query);
            }
        }
    }

    NeighborLists build_neighbor_lists(const Instance &instance, int n_nn) {
        assert(n_nn >= 1);
        const int n = instance.num_vertices();
        const int per_vertex = std::min(n_nn, n - 1);

        KdTree tree(instance);
        NeighborLists lists;
        lists.n_nn = n_nn;
        lists.offsets.resize(n + 1);
        lists.entries.reserve(static_cast<size_t>(n) * per_vertex);

        std::vector<int> scratch;
        for (int i = 0; i < n; ++i) {
            lists.offsets[i] = static_cast<int64_t>(lists.entries.size());
            tree.knn(i, per_vertex, scratch);
            lists.entries.insert(lists.entries.end(), scratch.begin(), scratch.end());
        }
        lists.offsets[n] = static_cast<int64_t>(lists.entries.size());
        return lists;
    }

    double sample_mean_arc_cost(const Instance &instance, Rng &rng) {
        const int n = instance.num_vertices();
        assert(n >= 2);
        double sum = 0.0;
        for (int s = 0; s < n; ++s) {
            int i, j;
            do {
                i = rng.uniform_int(0, n - 1);
                j = rng.uniform_int(0, n - 1);
            } while (i == j);
            sum += instance.cost(i, j);
        }
        return sum / static_cast<double>(n);
    }

}  // namespace carver
