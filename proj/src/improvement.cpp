#include "carver/improvement.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace carver {

    namespace {
        constexpr int kRecreateNeighborScan = 64;
        constexpr int64_t kCoherencePeriod = 1000;

        double now_seconds() {
            return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
        }

        int random_served_customer(const Solution &s, Rng &rng) {
            const int n = s.instance().num_customers();
            int v;
            do {
                v = rng.uniform_int(1, n);
            } while (!s.is_served(v));
            return v;
        }
    }  // namespace

    ShakingState::ShakingState(int num_vertices)
        : omega_base(static_cast<int>(std::ceil(std::log(static_cast<double>(num_vertices))))),
          omega_max(std::max(2 * omega_base, 15)),
          omega(num_vertices, omega_base) { }

    std::vector<int> ruin_walk(Solution &solution, int seed, int omega, const NeighborLists &neighbors, Rng &rng) {
        CARVER_VERIFY(solution.is_served(seed), "ruin walk seeded at an unserved customer");
        std::vector<int> removed;
        removed.reserve(omega);
        int current = seed;
        for (int step = 0; step < omega; ++step) {
            const int prev = solution.pred(current);
            const int next = solution.succ(current);
            const int route = solution.route_of(current);
            solution.remove_customer(current);
            removed.push_back(current);
            if (solution.route_size(route) == 0) solution.remove_route(route);

            int candidates[3];
            int n = 0;
            if (prev != 0 && solution.is_served(prev)) candidates[n++] = prev;
            if (next != 0 && solution.is_served(next)) candidates[n++] = next;
            // Jump: nearest served neighbor, preferring one on another route.
            int jump = 0;
            const int32_t *list = neighbors.begin(current);
            const int size = neighbors.size(current);
            for (int k = 0; k < size; ++k) {
                const int w = list[k];
                if (w == 0 || !solution.is_served(w)) continue;
                if (jump == 0) jump = w;
                if (solution.route_of(w) != route) {
                    jump = w;
                    break;
                }
            }
            if (jump != 0) candidates[n++] = jump;
            if (n == 0) break;  // premature stop: nothing left to walk to
            current = candidates[rng.uniform_int(0, n - 1)];
        }
        return removed;
    }

    std::vector<int> recreate(Solution &solution, const std::vector<int> &removed, const NeighborLists &neighbors, Rng &rng,
                              bool global, double unserved_prob, int route_target) {
        const Instance &inst = solution.instance();
        CostProvider &provider = solution.provider();
        const bool plus = provider.plus();

        std::vector<int> order;
        order.reserve(removed.size());
        for (const int v : removed) {
            if (!solution.is_served(v)) order.push_back(v);
        }
        const int criterion = rng.uniform_int(0, 2);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (criterion == 2) {  // demand decreasing
                if (inst.demand(a) != inst.demand(b)) return inst.demand(a) > inst.demand(b);
            } else {  // depot distance, ascending or descending
                const double da = inst.cost(0, a);
                const double db = inst.cost(0, b);
                if (da != db) return criterion == 0 ? da < db : da > db;
            }
            return a < b;
        });

        // Dedup marks over route ids; ids created while recreating stay within
        // the reserve below (one new route per customer at most).
        std::vector<int32_t> mark;
        int epoch = 0;
        if (!global) {
            int max_route = 0;
            for (const int r : solution.active_routes()) max_route = std::max(max_route, r);
            mark.assign(max_route + static_cast<int>(order.size()) + 2, 0);
        }

        const auto arc = [&](int a, int b) { return a == b ? 0.0 : provider.cost(a, b); };
        std::vector<int> leftovers;
        for (const int v : order) {
            const int64_t demand = inst.demand(v);
            double best_delta = std::numeric_limits<double>::infinity();
            int best_route = -1;
            int best_after = 0;

            const auto try_route = [&](int r) {
                if (solution.route_load(r) + demand > inst.capacity()) return;
                int a = 0;
                int next = solution.route_first(r);
                for (;;) {
                    const double base = plus ? (a == 0 ? solution.cost_pred(next) : solution.cost_succ(a)) : arc(a, next);
                    const double delta = arc(a, v) + arc(v, next) - base;
                    if (delta < best_delta) {
                        best_delta = delta;
                        best_route = r;
                        best_after = a;
                    }
                    if (next == 0) break;
                    a = next;
                    next = solution.succ(next);
                }
            };

            if (global) {
                for (const int r : solution.active_routes()) try_route(r);
            } else {
                ++epoch;
                const int32_t *list = neighbors.begin(v);
                const int size = neighbors.size(v);
                int scanned = 0;
                for (int k = 0; k < size && scanned < kRecreateNeighborScan; ++k) {
                    const int w = list[k];
                    if (w == 0 || !solution.is_served(w)) continue;
                    ++scanned;
                    const int r = solution.route_of(w);
                    if (mark[r] == epoch) continue;
                    mark[r] = epoch;
                    try_route(r);
                }
            }

            if (best_route >= 0) {
                solution.insert_customer(v, best_route, best_after);
            } else if (unserved_prob < 0.0 || solution.num_routes() < route_target || rng.uniform() > unserved_prob) {
                const int r = solution.create_route();
                solution.insert_customer(v, r, 0);
            } else {
                leftovers.push_back(v);
            }
        }
        return leftovers;
    }

    void update_shaking(ShakingState &state, const std::vector<int> &removed, double cost_after, double cost_before) {
        for (const int v : removed) {
            if (cost_after < cost_before) {
                state.omega[v] = std::max(state.omega[v] - 1, 1);
            } else {
                state.omega[v] = std::min(state.omega[v] + 1, state.omega_max);
            }
        }
    }

    bool sa_accept(double cost_cur, double cost_new, double temperature, Rng &rng, bool paper_sign) {
        const double noise = temperature * std::log(rng.uniform_open());
        return paper_sign ? cost_new < cost_cur + noise : cost_new < cost_cur - noise;
    }

    Solution core_opt(Solution &working, const NeighborLists &neighbors, const MoveGeneratorSet &generators,
                      SparsificationState &sparsification, ShakingState &shaking, Rng &rng, const SolverParams &params,
                      double t0, RunReport *report) {
        working.clear_log();
        Solution best = working;
        if (params.core_opt_iterations <= 0) return best;

        const double tf = params.tf_ratio * t0;
        const double cooling = std::pow(tf / t0, 1.0 / static_cast<double>(params.core_opt_iterations));
        double temperature = t0;

        LocalSearch ls(working.instance(), working.provider(), generators, sparsification, rng, params.ls);
        double best_cost = working.cost();
        double cur_cost = best_cost;
        ChangeList pending;  // accepted changes not yet replayed onto `best`
        uint64_t coherence_checks = 0;

        // With sync_by_copy the log is never replayed (synchronization uses
        // whole-solution copies), but it must stay enabled: the local search
        // relies on log marks to roll back speculative mutations. The copy
        // scheme mirrors the classic structure: the neighbor solution is a
        // fresh copy of the incumbent every iteration, the incumbent a copy of
        // the neighbor on acceptance, and the best a copy on improvement.
        Solution incumbent = working;  // only consulted with sync_by_copy

        for (int64_t iter = 0; iter < params.core_opt_iterations; ++iter) {
            if (params.sync_by_copy) working = incumbent;
            working.svc().clear();
            const int seed = random_served_customer(working, rng);
            const std::vector<int> removed = ruin_walk(working, seed, shaking.omega[seed], neighbors, rng);
            recreate(working, removed, neighbors, rng, params.recreate_global);
            ls.descend(working);

            const double new_cost = working.cost();
            update_shaking(shaking, removed, new_cost, cur_cost);
            sparsification.update(working.svc().members(), new_cost < cur_cost);

            if (sa_accept(cur_cost, new_cost, temperature, rng, params.sa_paper_sign)) {
                cur_cost = new_cost;
                if (params.sync_by_copy) {
                    incumbent = working;
                } else {
                    pending.insert(pending.end(), working.log().begin(), working.log().end());
                }
                if (new_cost < best_cost) {
                    best_cost = new_cost;
                    if (params.sync_by_copy) {
                        best = working;
                    } else {
                        best.apply_changes(pending);
                        pending.clear();
                        CARVER_VERIFY(best.cost() == best_cost, "replayed best solution disagrees on cost");
                    }
                }
            } else if (!params.sync_by_copy) {
                working.undo_log();
                // (With sync_by_copy a rejected neighbor is simply discarded:
                // the next iteration starts from a fresh copy of the incumbent.)
            }
            working.clear_log();

            if ((iter + 1) % kCoherencePeriod == 0) {
                ++coherence_checks;
                CARVER_VERIFY(working.cost() == working.recompute_cost(), "maintained cost diverged from recomputation");
            }
            temperature *= cooling;
        }
        if (params.sync_by_copy) working = incumbent;  // leave working at the accepted state

        if (report != nullptr) {
            report->ls_applied += ls.applied_moves();
            report->ls_evaluated += ls.evaluated_moves();
            report->ls_mismatches += ls.delta_mismatches();
            report->prefix_recomputes = working.prefix_recompute_count();
            report->coherence_checks += coherence_checks;
            report->initial_temperature = t0;
        }
        return best;
    }

    void route_min(Solution &working, int route_target, const NeighborLists &neighbors, const MoveGeneratorSet &generators,
                   SparsificationState &sparsification, Rng &rng, const SolverParams &params, RunReport *report) {
        LocalSearch ls(working.instance(), working.provider(), generators, sparsification, rng, params.ls);
        const int budget = params.route_min_iterations;
        double unserved_prob = 1.0;
        const double decay = std::pow(0.01, 1.0 / static_cast<double>(std::max(budget, 1)));

        double cur_cost = working.cost();
        int cur_routes = working.num_routes();
        double best_cost = cur_cost;
        int best_routes = cur_routes;
        ChangeList since_best;  // accepted changes past the best state
        std::vector<int> pool;  // customers currently left unserved

        working.clear_log();
        for (int iter = 0; iter < budget && best_routes > route_target; ++iter) {
            working.svc().clear();
            const int seed = random_served_customer(working, rng);
            const int first_route = working.route_of(seed);
            int second_route = -1;
            const int32_t *list = neighbors.begin(seed);
            const int size = neighbors.size(seed);
            for (int k = 0; k < size; ++k) {
                const int w = list[k];
                if (w != 0 && working.is_served(w) && working.route_of(w) != first_route) {
                    second_route = working.route_of(w);
                    break;
                }
            }

            std::vector<int> removed(pool);
            const auto destroy = [&](int r) {
                while (working.route_size(r) > 0) {
                    const int v = working.route_first(r);
                    working.remove_customer(v);
                    removed.push_back(v);
                }
                working.remove_route(r);
            };
            destroy(first_route);
            if (second_route >= 0) destroy(second_route);

            std::vector<int> leftovers =
                recreate(working, removed, neighbors, rng, params.recreate_global, unserved_prob, route_target);
            ls.descend(working);

            const double new_cost = working.cost();
            const int new_routes = working.num_routes();
            const bool accept = new_cost < cur_cost || (new_cost == cur_cost && new_routes < cur_routes);
            if (accept) {
                cur_cost = new_cost;
                cur_routes = new_routes;
                since_best.insert(since_best.end(), working.log().begin(), working.log().end());
                pool = std::move(leftovers);
                if (pool.empty() &&
                    (new_routes < best_routes || (new_routes == best_routes && new_cost < best_cost))) {
                    best_routes = new_routes;
                    best_cost = new_cost;
                    since_best.clear();
                }
            } else {
                working.undo_log();  // pool is unchanged: the pre-iteration unserved set
            }
            working.clear_log();
            unserved_prob *= decay;
        }

        working.undo_changes(since_best);
        working.clear_log();
        working.svc().clear();
        CARVER_VERIFY(working.cost() == best_cost, "route minimization best-state restore diverged");
        CARVER_VERIFY(working.feasibility_report().feasible(), "route minimization produced an infeasible solution");

        if (report != nullptr) {
            report->ls_applied += ls.applied_moves();
            report->ls_evaluated += ls.evaluated_moves();
            report->ls_mismatches += ls.delta_mismatches();
        }
    }

    Solution solve(const Instance &instance, CostProvider &provider, const SolverParams &params, RunReport *report) {
        const double t_start = now_seconds();
        Rng rng(params.seed);

        const NeighborLists neighbors = build_neighbor_lists(instance, params.n_nn);
        MoveGeneratorSet generators(instance, neighbors, params.n_gs);
        SparsificationParams sp;
        sp.gamma_base = params.gamma_base;
        sp.lambda = params.gamma_lambda;
        sp.delta = params.gamma_delta;
        SparsificationState sparsification(instance.num_vertices(), sp);
        ShakingState shaking(instance.num_vertices());
        const double t_preprocess = now_seconds();

        Solution solution = savings_construction(instance, provider, neighbors, params.n_cw, params.svc_capacity);
        const int route_target = greedy_route_estimate(instance, params.first_fit_decreasing);
        const double t_construction = now_seconds();

        if (report != nullptr) {
            report->instance = instance.name();
            report->seed = params.seed;
            report->construction_cost = solution.cost();
            report->construction_routes = solution.num_routes();
            report->route_estimate = route_target;
        }

        const bool run_route_min = params.route_min_enabled && solution.num_routes() > route_target;
        if (run_route_min) {
            route_min(solution, route_target, neighbors, generators, sparsification, rng, params, report);
        }
        const double t_route_min = now_seconds();
        if (report != nullptr) {
            report->route_min_ran = run_route_min;
            report->route_min_cost = solution.cost();
            report->route_min_routes = solution.num_routes();
        }

        const double mean_arc = sample_mean_arc_cost(instance, rng);
        const double t0 = params.t0_factor * mean_arc;
        Solution best = core_opt(solution, neighbors, generators, sparsification, shaking, rng, params, t0, report);
        const double t_end = now_seconds();

        CARVER_VERIFY(best.feasibility_report().feasible(), "solver produced an infeasible solution");
        if (report != nullptr) {
            report->final_cost = best.cost();
            report->final_routes = best.num_routes();
            report->t_preprocess = t_preprocess - t_start;
            report->t_construction = t_construction - t_preprocess;
            report->t_route_min = t_route_min - t_construction;
            report->t_core_opt = t_end - t_route_min;
            report->t_total = t_end - t_start;
            report->cache_hit_ratio = provider.hit_ratio();
        }
        return best;
    }

}  // namespace carver
