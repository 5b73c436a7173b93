#include "doctest.h"
#include "helpers.hpp"

using namespace carver;
using carver::testing::make_instance;
using carver::testing::random_instance;

TEST_CASE("first-fit estimate on the hand example") {
    // demands [3,3,2,2] with Q=5: 3->b1, 3->b2, 2->b1, 2->b2
    const Instance inst = make_instance({{0, 0, 0}, {1, 0, 3}, {2, 0, 3}, {3, 0, 2}, {4, 0, 2}}, 5);
    CHECK(greedy_route_estimate(inst, false) == 2);
    CHECK(greedy_route_estimate(inst, true) == 2);
}

TEST_CASE("first-fit bounds: full demands and a single customer") {
    const Instance full = make_instance({{0, 0, 0}, {1, 0, 5}, {2, 0, 5}, {3, 0, 5}}, 5);
    CHECK(greedy_route_estimate(full, false) == 3);
    const Instance single = make_instance({{0, 0, 0}, {1, 0, 2}}, 5);
    CHECK(greedy_route_estimate(single, false) == 1);
}

TEST_CASE("first-fit never beats the demand lower bound") {
    Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(rng, 40, 10);
        const int k = greedy_route_estimate(inst, false);
        const int lb = static_cast<int>((inst.total_demand() + inst.capacity() - 1) / inst.capacity());
        CHECK(k >= lb);
        CHECK(k <= inst.num_customers());
        const int kd = greedy_route_estimate(inst, true);
        CHECK(kd >= lb);
        CHECK(kd <= inst.num_customers());
    }
}

TEST_CASE("savings merges two symmetric customers into one route") {
    const Instance inst = make_instance({{0, 0, 0}, {-10, 0, 1}, {10, 0, 1}}, 2);
    CostProvider provider(inst, CostMode::CachedPlus);
    const NeighborLists neighbors = build_neighbor_lists(inst, 2);
    const Solution s = savings_construction(inst, provider, neighbors, 2, 50);
    // saving s_12 = 10 + 10 - 20 = 0; zero savings are still applied? No:
    // with both on a line through the depot the merged tour has the same cost,
    // so accept either outcome but demand feasibility and full service.
    CHECK(s.feasibility_report().feasible());
}

TEST_CASE("savings merges customers on the same side of the depot") {
    const Instance inst = make_instance({{0, 0, 0}, {100, 0, 1}, {100, 5, 1}}, 2);
    CostProvider provider(inst, CostMode::CachedPlus);
    const NeighborLists neighbors = build_neighbor_lists(inst, 2);
    const Solution s = savings_construction(inst, provider, neighbors, 2, 50);
    CHECK(s.num_routes() == 1);
    CHECK(s.feasibility_report().feasible());
    CHECK(s.cost() == s.recompute_cost());
}

TEST_CASE("savings respects the capacity veto") {
    const Instance inst = make_instance({{0, 0, 0}, {100, 0, 2}, {100, 5, 2}}, 3);
    CostProvider provider(inst, CostMode::CachedPlus);
    const NeighborLists neighbors = build_neighbor_lists(inst, 2);
    const Solution s = savings_construction(inst, provider, neighbors, 2, 50);
    CHECK(s.num_routes() == 2);
    CHECK(s.feasibility_report().feasible());
}

TEST_CASE("savings output is feasible and cost-coherent on random instances") {
    Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst = random_instance(rng, 120, 10);
        CostProvider provider(inst, CostMode::CachedPlus);
        const NeighborLists neighbors = build_neighbor_lists(inst, 20);
        const Solution s = savings_construction(inst, provider, neighbors, 15, 50);
        CHECK(s.feasibility_report().feasible());
        CHECK(s.cost() == s.recompute_cost());
    }
}

TEST_CASE("construction is deterministic") {
    Rng rng(53);
    const Instance inst = random_instance(rng, 80, 10);
    CostProvider p1(inst, CostMode::CachedPlus);
    CostProvider p2(inst, CostMode::CachedPlus);
    const NeighborLists neighbors = build_neighbor_lists(inst, 20);
    const Solution a = savings_construction(inst, p1, neighbors, 15, 50);
    const Solution b = savings_construction(inst, p2, neighbors, 15, 50);
    CHECK(a.state_signature() == b.state_signature());
}
