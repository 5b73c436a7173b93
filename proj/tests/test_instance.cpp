#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace carver;
using carver::testing::make_instance;
using carver::testing::random_instance;

TEST_CASE("parse_instance reads a minimal document") {
    const std::string text =
        "NAME : tiny\n"
        "DIMENSION : 3\n"
        "EDGE_WEIGHT_TYPE : EUC_2D\n"
        "CAPACITY : 10\n"
        "NODE_COORD_SECTION\n"
        "1 0 0\n"
        "2 3 4\n"
        "3 0 5\n"
        "DEMAND_SECTION\n"
        "1 0\n"
        "2 1\n"
        "3 1\n"
        "DEPOT_SECTION\n"
        "1\n"
        "-1\n"
        "EOF\n";
    const Instance inst = parse_instance(text);
    CHECK(inst.num_customers() == 2);
    CHECK(inst.capacity() == 10);
    CHECK(inst.cost(0, 1) == 5.0);  // (0,0)-(3,4)
}

TEST_CASE("parse_instance rejects unsupported weight types") {
    const std::string text =
        "DIMENSION : 2\nEDGE_WEIGHT_TYPE : EXPLICIT\nCAPACITY : 10\n"
        "NODE_COORD_SECTION\n1 0 0\n2 1 1\nDEMAND_SECTION\n1 0\n2 1\nEOF\n";
    CHECK_THROWS_AS(parse_instance(text), ParseError);
}

TEST_CASE("parse_instance rejects a demand above capacity") {
    const std::string text =
        "DIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 5\n"
        "NODE_COORD_SECTION\n1 0 0\n2 1 1\nDEMAND_SECTION\n1 0\n2 9\nEOF\n";
    CHECK_THROWS_AS(parse_instance(text), ParseError);
}

TEST_CASE("arc cost is rounded Euclidean distance") {
    const Instance inst = make_instance({{0, 0, 0}, {3, 4, 1}, {1, 1, 1}}, 10);
    CHECK(inst.cost(0, 1) == 5.0);
    CHECK(inst.cost(0, 2) == 1.0);  // sqrt(2) rounds to 1
}

TEST_CASE("arc costs match brute force on a random instance") {
    Rng rng(11);
    const Instance inst = random_instance(rng, 49, 100);
    for (int i = 0; i < inst.num_vertices(); ++i) {
        for (int j = 0; j < inst.num_vertices(); ++j) {
            if (i == j) continue;
            const double dx = static_cast<double>(inst.x(i) - inst.x(j));
            const double dy = static_cast<double>(inst.y(i) - inst.y(j));
            CHECK(inst.cost(i, j) == std::round(std::sqrt(dx * dx + dy * dy)));
            CHECK(inst.cost(i, j) == inst.cost(j, i));
        }
    }
}

TEST_CASE("all cost provider modes agree on every pair") {
    Rng rng(12);
    const Instance inst = random_instance(rng, 60, 100);
    CostProvider on_demand(inst, CostMode::OnDemand);
    CostProvider on_demand_plus(inst, CostMode::OnDemandPlus);
    CostProvider cached(inst, CostMode::Cached);
    CostProvider cached_plus(inst, CostMode::CachedPlus);
    for (int i = 0; i < inst.num_vertices(); ++i) {
        for (int j = 0; j < inst.num_vertices(); ++j) {
            if (i == j) continue;
            const double expected = inst.cost(i, j);
            CHECK(on_demand.cost(i, j) == expected);
            CHECK(on_demand_plus.cost(i, j) == expected);
            CHECK(cached.cost(i, j) == expected);
            CHECK(cached_plus.cost(i, j) == expected);
        }
    }
    CHECK(cached.hits() + cached.misses() == cached.queries());
    CHECK(cached.hits() > 0);        // symmetric revisits hit the cache
    CHECK(on_demand.hits() == 0);    // no cache in on-demand modes
}

TEST_CASE("cache hit on normalized pair ordering") {
    const Instance inst = make_instance({{0, 0, 0}, {1, 0, 1}, {2, 0, 1}, {3, 0, 1}, {4, 0, 1}, {5, 0, 1},
                                         {6, 0, 1}, {7, 0, 1}, {8, 0, 1}, {9, 0, 1}},
                                        10);
    CostProvider provider(inst, CostMode::Cached);
    provider.cost(5, 9);
    CHECK(provider.hits() == 0);
    provider.cost(9, 5);
    CHECK(provider.hits() == 1);  // (9,5) normalizes to (5,9), h = 5 xor 9 = 12
}

TEST_CASE("plus flag marks the plus modes only") {
    const Instance inst = make_instance({{0, 0, 0}, {1, 0, 1}}, 10);
    CHECK_FALSE(CostProvider(inst, CostMode::OnDemand).plus());
    CHECK(CostProvider(inst, CostMode::OnDemandPlus).plus());
    CHECK_FALSE(CostProvider(inst, CostMode::Cached).plus());
    CHECK(CostProvider(inst, CostMode::CachedPlus).plus());
}

TEST_CASE("neighbor lists on collinear points") {
    const Instance inst = make_instance({{0, 0, 0}, {1, 0, 1}, {2, 0, 1}, {9, 0, 1}}, 10);
    const NeighborLists lists = build_neighbor_lists(inst, 2);
    CHECK(lists.size(0) == 2);
    CHECK(lists.begin(0)[0] == 1);
    CHECK(lists.begin(0)[1] == 2);
}

TEST_CASE("neighbor lists clamp to |V| - 1") {
    Rng rng(13);
    const Instance inst = random_instance(rng, 9, 100);
    const NeighborLists lists = build_neighbor_lists(inst, 15);
    for (int v = 0; v < inst.num_vertices(); ++v) CHECK(lists.size(v) == 9);
}

TEST_CASE("neighbor lists equal brute-force kNN with index tie-break") {
    Rng rng(14);
    const Instance inst = random_instance(rng, 199, 100, 300);  // small span forces cost ties
    const NeighborLists lists = build_neighbor_lists(inst, 50);
    for (int v = 0; v < inst.num_vertices(); ++v) {
        std::vector<int> expected;
        for (int u = 0; u < inst.num_vertices(); ++u) {
            if (u != v) expected.push_back(u);
        }
        std::sort(expected.begin(), expected.end(), [&](int a, int b) {
            const double ca = inst.cost(v, a);
            const double cb = inst.cost(v, b);
            return ca != cb ? ca < cb : a < b;
        });
        expected.resize(50);
        REQUIRE(lists.size(v) == 50);
        for (int k = 0; k < 50; ++k) CHECK(lists.begin(v)[k] == expected[k]);
    }
}

TEST_CASE("sampled mean arc cost on a 2-vertex instance") {
    const Instance inst = make_instance({{0, 0, 0}, {3, 4, 1}}, 10);
    Rng rng(1);
    CHECK(sample_mean_arc_cost(inst, rng) == 5.0);
}

TEST_CASE("sampled mean arc cost is zero for coincident vertices") {
    const Instance inst = make_instance({{7, 7, 0}, {7, 7, 1}, {7, 7, 1}}, 10);
    Rng rng(1);
    CHECK(sample_mean_arc_cost(inst, rng) == 0.0);
}

TEST_CASE("generated instances round-trip and have demands in 1..3") {
    std::vector<std::pair<double, double>> points;
    Rng coord_rng(21);
    for (int i = 0; i < 40; ++i)
        points.emplace_back(coord_rng.uniform() * 500.0, coord_rng.uniform() * 500.0);
    Rng rng(22);
    const Instance inst = generate_instance(points, 0, 50, rng, "gen");
    CHECK(inst.num_customers() == 39);
    CHECK(inst.demand(0) == 0);
    for (int i = 1; i < inst.num_vertices(); ++i) {
        CHECK(inst.demand(i) >= 1);
        CHECK(inst.demand(i) <= 3);
    }
    const Instance again = parse_instance(serialize_instance(inst));
    CHECK(again.num_customers() == inst.num_customers());
    CHECK(again.capacity() == inst.capacity());
    for (int i = 0; i < inst.num_vertices(); ++i) {
        CHECK(again.x(i) == inst.x(i));
        CHECK(again.y(i) == inst.y(i));
        CHECK(again.demand(i) == inst.demand(i));
    }
}

TEST_CASE("projection maps the centroid to the origin") {
    const auto projected = project_coordinates({{45.0, 9.0}});
    CHECK(projected[0].first == 0);
    CHECK(projected[0].second == 0);
}

TEST_CASE("projection of a 0.001 degree latitude offset is ~111 m") {
    const auto projected = project_coordinates({{45.0, 9.0}, {45.001, 9.0}});
    const int64_t dy = projected[1].second - projected[0].second;
    // R * dlat = 6371000 * 0.001 * pi / 180 = 111.19 m; centroid splits it
    CHECK(std::abs(dy - 111) <= 1);
}

TEST_CASE("projection applies the cos(latitude) factor") {
    const auto projected = project_coordinates({{60.0, 10.0}, {60.0, 10.001}});
    const int64_t dx = projected[1].first - projected[0].first;
    // R * dlon * cos(60 deg) = 111.19 * 0.5 = 55.6 m
    CHECK(std::abs(dx - 56) <= 1);
}

TEST_CASE("projection rejects out-of-range coordinates") {
    CHECK_THROWS(project_coordinates({{95.0, 0.0}}));
    CHECK_THROWS(project_coordinates({{0.0, 190.0}}));
}
