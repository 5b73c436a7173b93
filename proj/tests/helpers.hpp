#ifndef CARVER_TESTS_HELPERS_HPP
#define CARVER_TESTS_HELPERS_HPP

#include <tuple>
#include <utility>
#include <vector>

#include "carver/improvement.hpp"

namespace carver::testing {

    // Instance from explicit (x, y, demand) rows; row 0 is the depot.
    inline Instance make_instance(const std::vector<std::tuple<int64_t, int64_t, int64_t>> &rows, int64_t capacity,
                                  const std::string &name = "fixture") {
        std::vector<int64_t> xs, ys, demands;
        for (const auto &[x, y, q] : rows) {
            xs.push_back(x);
            ys.push_back(y);
            demands.push_back(q);
        }
        return Instance(name, std::move(xs), std::move(ys), std::move(demands), capacity);
    }

    // Uniform random instance on a square grid with demands in [1, max_demand].
    inline Instance random_instance(Rng &rng, int num_customers, int64_t capacity, int64_t span = 1000,
                                    int64_t max_demand = 3) {
        std::vector<int64_t> xs, ys, demands;
        xs.reserve(num_customers + 1);
        for (int i = 0; i <= num_customers; ++i) {
            xs.push_back(rng.uniform_int(0, static_cast<int>(span)));
            ys.push_back(rng.uniform_int(0, static_cast<int>(span)));
            demands.push_back(i == 0 ? 0 : rng.uniform_int(1, static_cast<int>(max_demand)));
        }
        return Instance("random", std::move(xs), std::move(ys), std::move(demands), capacity);
    }

    // A feasible solution built by first-fit over shuffled customers, one route
    // per bin, random order within routes.
    inline Solution random_solution(const Instance &inst, CostProvider &provider, Rng &rng, int svc_capacity = 50) {
        Solution s(inst, provider, svc_capacity);
        std::vector<int> customers;
        for (int i = 1; i <= inst.num_customers(); ++i) customers.push_back(i);
        rng.shuffle(customers.begin(), customers.end());
        std::vector<int> routes;
        for (const int v : customers) {
            int placed = -1;
            for (const int r : routes) {
                if (s.route_load(r) + inst.demand(v) <= inst.capacity()) {
                    placed = r;
                    break;
                }
            }
            if (placed < 0) {
                placed = s.create_route();
                routes.push_back(placed);
            }
            s.insert_customer(v, placed, s.route_last(placed));
        }
        s.clear_log();
        return s;
    }

}  // namespace carver::testing

#endif
