#include "carver/construction.hpp"

#include <algorithm>

namespace carver {

    int greedy_route_estimate(const Instance &instance, bool decreasing) {
        std::vector<int64_t> demands;
        demands.reserve(instance.num_customers());
        for (int i = 1; i < instance.num_vertices(); ++i) demands.push_back(instance.demand(i));
        if (decreasing) std::sort(demands.begin(), demands.end(), std::greater<>());

        const int64_t capacity = instance.capacity();
        std::vector<int64_t> bins;
        for (const int64_t d : demands) {
            bool placed = false;
            for (int64_t &bin : bins) {
                if (bin + d <= capacity) {
                    bin += d;
                    placed = true;
                    break;
                }
            }
            if (!placed) bins.push_back(d);
        }
        return static_cast<int>(bins.size());
    }

    Solution savings_construction(const Instance &instance, CostProvider &provider, const NeighborLists &neighbors, int n_cw,
                                  int svc_capacity) {
        Solution solution(instance, provider, svc_capacity);
        solution.set_logging(false);
        solution.set_svc_updates(false);

        for (int i = 1; i < instance.num_vertices(); ++i) {
            const int route = solution.create_route();
            solution.insert_customer(i, route, 0);
        }

        struct Saving {
            double value;
            int32_t i;
            int32_t j;
        };
        std::vector<Saving> savings;
        for (int i = 1; i < instance.num_vertices(); ++i) {
            const int32_t *list = neighbors.begin(i);
            const int size = neighbors.size(i);
            int taken = 0;
            for (int k = 0; k < size && taken < n_cw; ++k) {
                const int j = list[k];
                if (j == i || j == 0) continue;
                ++taken;
                if (j < i) continue;  // the pair appears once, from its smaller endpoint
                savings.push_back({provider.cost(i, 0) + provider.cost(0, j) - provider.cost(i, j), i, static_cast<int32_t>(j)});
            }
        }
        std::sort(savings.begin(), savings.end(), [](const Saving &a, const Saving &b) {
            if (a.value != b.value) return a.value > b.value;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });

        for (const Saving &s : savings) {
            const int ri = solution.route_of(s.i);
            const int rj = solution.route_of(s.j);
            if (ri == rj) continue;
            if (solution.route_load(ri) + solution.route_load(rj) > instance.capacity()) continue;

            // Merge only across free route endpoints, orienting both routes so
            // the arc (i, j) joins the end of i's route to the start of j's.
            const bool i_first = solution.route_first(ri) == s.i;
            const bool i_last = solution.route_last(ri) == s.i;
            const bool j_first = solution.route_first(rj) == s.j;
            const bool j_last = solution.route_last(rj) == s.j;
            if (!(i_first || i_last) || !(j_first || j_last)) continue;

            if (!i_last) solution.reverse_segment(ri, solution.route_first(ri), solution.route_last(ri));
            if (!j_first) solution.reverse_segment(rj, solution.route_first(rj), solution.route_last(rj));

            int after = s.i;
            while (solution.route_size(rj) > 0) {
                const int v = solution.route_first(rj);
                solution.remove_customer(v);
                solution.insert_customer(v, ri, after);
                after = v;
            }
            solution.remove_route(rj);
        }

        solution.set_logging(true);
        solution.set_svc_updates(true);
        return solution;
    }

}  // namespace carver
