#ifndef CARVER_CONSTRUCTION_HPP
#define CARVER_CONSTRUCTION_HPP

#include "kdtree.hpp"
#include "solution.hpp"

namespace carver {

    // First-fit bin-packing estimate of the minimum number of routes. With
    // `decreasing` the demands are sorted largest first, otherwise customers
    // are packed in index order.
    int greedy_route_estimate(const Instance &instance, bool decreasing);

    // Savings construction restricted to each customer's n_cw nearest
    // neighbors: every customer starts in a singleton route, then the
    // endpoint merges with the largest savings values are applied while
    // capacity permits. Produces a complete feasible solution.
    Solution savings_construction(const Instance &instance, CostProvider &provider, const NeighborLists &neighbors, int n_cw,
                                  int svc_capacity);

}  // namespace carver

#endif
