#ifndef CARVER_IMPROVEMENT_HPP
#define CARVER_IMPROVEMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "construction.hpp"
#include "localsearch.hpp"

namespace carver {

    // Per-customer ruin intensities, adapted by solution quality.
    struct ShakingState {
        int omega_base;
        int omega_max;
        std::vector<int32_t> omega;

        explicit ShakingState(int num_vertices);
    };

    // Random walk rooted at `seed`: removes up to `omega` served customers,
    // stepping uniformly to the predecessor, the successor, or a jump to a
    // customer of a (possibly different) nearby route; stops prematurely when
    // no candidate remains.
    std::vector<int> ruin_walk(Solution &solution, int seed, int omega, const NeighborLists &neighbors, Rng &rng);

    // Reinserts the removed customers, ordered by a uniformly chosen criterion
    // (depot distance ascending/descending, or demand descending), each at the
    // min-delta feasible position among candidate routes: the deduplicated
    // routes of nearby customers, or every route in global mode. When no
    // feasible position exists a new route is opened — unless
    // unserved_prob >= 0 and the route count has reached route_target and a
    // uniform draw falls below unserved_prob, in which case the customer is
    // left unserved. Returns the leftover list.
    std::vector<int> recreate(Solution &solution, const std::vector<int> &removed, const NeighborLists &neighbors, Rng &rng,
                              bool global, double unserved_prob = -1.0, int route_target = 0);

    // After an iteration: removed customers get omega - 1 on improvement and
    // omega + 1 otherwise, clamped to [1, omega_max].
    void update_shaking(ShakingState &state, const std::vector<int> &removed, double cost_after, double cost_before);

    // Accepts any strict improvement; accepts a worsening delta with
    // probability exp(-delta / T). With paper_sign the literal
    // "cost_new < cost_cur + T ln U" form is used instead.
    bool sa_accept(double cost_cur, double cost_new, double temperature, Rng &rng, bool paper_sign = false);

    struct SolverParams {
        uint64_t seed = 0;
        CostMode cost_mode = CostMode::CachedPlus;
        int n_nn = 1500;
        int n_cw = 100;
        int n_gs = 25;
        int svc_capacity = 50;
        double gamma_base = 0.25;
        double gamma_lambda = 2.0;
        double gamma_delta = 0.5;
        int route_min_iterations = 1000;     // Delta_RM
        int64_t core_opt_iterations = 100000;  // Delta_CO
        double t0_factor = 0.1;   // T_0 = t0_factor * mean sampled arc cost
        double tf_ratio = 0.01;   // T_f = tf_ratio * T_0
        bool recreate_global = false;
        bool sync_by_copy = false;  // full solution copies instead of do/undo lists
        bool sa_paper_sign = false;
        bool first_fit_decreasing = false;
        bool route_min_enabled = true;
        LsToggles ls;
    };

    struct RunReport {
        std::string instance;
        uint64_t seed = 0;
        double construction_cost = 0.0;
        int construction_routes = 0;
        int route_estimate = 0;
        bool route_min_ran = false;
        double route_min_cost = 0.0;
        int route_min_routes = 0;
        double final_cost = 0.0;
        int final_routes = 0;
        double gap_percent = -1.0;  // vs optional best known cost
        double t_preprocess = 0.0;
        double t_construction = 0.0;
        double t_route_min = 0.0;
        double t_core_opt = 0.0;
        double t_total = 0.0;
        double initial_temperature = 0.0;
        double cache_hit_ratio = 0.0;
        uint64_t ls_applied = 0;
        uint64_t ls_evaluated = 0;
        uint64_t ls_mismatches = 0;
        uint64_t prefix_recomputes = 0;
        uint64_t coherence_checks = 0;
    };

    // Core optimization: core_opt_iterations iterations of
    // shake -> descend with simulated-annealing acceptance, the incumbent and
    // best solutions synchronized strictly through do/undo change lists
    // (or full copies with sync_by_copy). Returns the best solution found.
    Solution core_opt(Solution &working, const NeighborLists &neighbors, const MoveGeneratorSet &generators,
                      SparsificationState &sparsification, ShakingState &shaking, Rng &rng, const SolverParams &params,
                      double t0, RunReport *report = nullptr);

    // Route minimization: repeatedly destroys a pair of close routes and
    // reinserts with a probabilistic-unserved policy whose probability decays
    // exponentially from 1 to 0.01 over the iteration budget. Modifies
    // `working` in place, leaving it at the best (complete, feasible) state.
    void route_min(Solution &working, int route_target, const NeighborLists &neighbors, const MoveGeneratorSet &generators,
                   SparsificationState &sparsification, Rng &rng, const SolverParams &params, RunReport *report = nullptr);

    // Full pipeline: construction, conditional route minimization, core
    // optimization.
    Solution solve(const Instance &instance, CostProvider &provider, const SolverParams &params, RunReport *report = nullptr);

}  // namespace carver

#endif
