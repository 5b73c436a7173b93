#ifndef CARVER_KDTREE_HPP
#define CARVER_KDTREE_HPP

#include <cstdint>
#include <vector>

#include "instance.hpp"

namespace carver {

    // Balanced 2-d tree over the instance vertices. Queries return the k
    // nearest other vertices ordered by (rounded arc cost, vertex index), the
    // same order a brute-force sort would produce.
    class KdTree {
    public:
        explicit KdTree(const Instance &instance);

        // Appends the min(k, |V|-1) nearest vertices to `out` (cleared first).
        void knn(int vertex, int k, std::vector<int> &out) const;

    private:
        struct Node {
            int vertex;
            int left;
            int right;
            uint8_t axis;
        };

        int build(std::vector<int> &vertices, int begin, int end, int depth);
        void search(int node, int query) const;

        const Instance &instance_;
        std::vector<Node> nodes_;
        int root_ = -1;

        // Query scratch (bounded max-heap keyed by (cost, index)).
        struct Entry {
            double cost;
            int vertex;
            bool operator<(const Entry &other) const {
                return cost < other.cost || (cost == other.cost && vertex < other.vertex);
            }
        };
        mutable std::vector<Entry> heap_;
        mutable size_t heap_capacity_ = 0;
        mutable double qx_ = 0, qy_ = 0;
        mutable int query_vertex_ = -1;
    };

    struct NeighborLists {
        int n_nn = 0;
        // Flattened lists: entries for vertex i are [offsets[i], offsets[i+1]).
        std::vector<int32_t> entries;
        std::vector<int64_t> offsets;

        const int32_t *begin(int i) const {
            return entries.data() + offsets[i];
        }
        const int32_t *end(int i) const {
            return entries.data() + offsets[i + 1];
        }
        int size(int i) const {
            return static_cast<int>(offsets[i + 1] - offsets[i]);
        }
    };

    // Per-vertex sorted nearest-neighbor lists built through the kd-tree.
    NeighborLists build_neighbor_lists(const Instance &instance, int n_nn);

    // Mean of |V| uniformly sampled arc costs (ordered pairs with replacement,
    // i == j rejected). Drives the initial simulated annealing temperature.
    double sample_mean_arc_cost(const Instance &instance, Rng &rng);

}  // namespace carver

#endif
