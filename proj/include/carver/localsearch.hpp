#ifndef CARVER_LOCALSEARCH_HPP
#define CARVER_LOCALSEARCH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "movegen.hpp"
#include "rng.hpp"
#include "solution.hpp"

namespace carver {

    enum class Operator : uint8_t {
        Relocate1,
        Exchange11,
        TwoOpt,
        Tail,
        Split,
        Cross21,
        Cross22,
        Relocate2,
        Relocate3,
        Cross33,
        EjectionChain,
    };

    struct LsToggles {
        // Repeat each tier until none of its operators improves, instead of a
        // single ordered pass per tier per outer loop.
        bool rvnd_inner_loop = false;
        // Recompute cumulative-load prefixes on demand; when off they are
        // precomputed for every route at the start of each load-dependent
        // neighborhood exploration.
        bool lazy_loads = true;
    };

    // SVC-scoped granular local search. Operators are grouped in three tiers
    // of increasing cardinality; within one descent each tier's order is
    // shuffled once, each operator runs once per outer pass, and the descent
    // ends when a full pass over all tiers yields no improvement.
    //
    // Each operator run drains a priority queue of candidate move descriptors
    // (seeded from the cached vertices' active generators, ordered by
    // improvement): the best descriptor is re-validated against the current
    // solution at pop time, stale ones are re-queued or discarded, and after a
    // mutation only descriptors incident to the touched vertices are
    // re-evaluated.
    class LocalSearch {
    public:
        LocalSearch(const Instance &instance, CostProvider &provider, const MoveGeneratorSet &generators,
                    SparsificationState &sparsification, Rng &rng, const LsToggles &toggles = {});

        // Descends from the current solution; returns the (non-negative)
        // total improvement.
        double descend(Solution &solution);

        uint64_t applied_moves() const {
            return applied_;
        }
        uint64_t evaluated_moves() const {
            return evaluated_;
        }
        // Applied moves whose realized cost change differed from the
        // evaluated delta. Always tracked; any nonzero value is a bug.
        uint64_t delta_mismatches() const {
            return mismatches_;
        }

        const LsToggles &toggles() const {
            return toggles_;
        }

    private:
        struct Move {
            Operator op;
            double delta;
            int32_t v;
            int32_t u;
            int32_t variant;
            double gen_cost;
        };

        bool run_operator(Solution &s, Operator op);
        bool run_ejection_chains(Solution &s);
        void push_candidates(Solution &s, Operator op, int v);
        Move evaluate(Solution &s, Operator op, int v, int u, double gen_cost);
        void apply(Solution &s, const Move &move);

        void heap_push(const Move &move);
        Move heap_pop();

        double arc(int a, int b) {
            return a == b ? 0.0 : provider_.cost(a, b);
        }
        // Anchored-cost readers: in "plus" cost modes these come from the
        // solution instead of the provider.
        double cost_before(const Solution &s, int v) {
            return plus_ ? s.cost_pred(v) : arc(s.pred(v), v);
        }
        double cost_after(const Solution &s, int v) {
            return plus_ ? s.cost_succ(v) : arc(v, s.succ(v));
        }

        // Segment helpers: end of the length-L chain starting at v, or -1 when
        // it would run past the route end.
        static int segment_end(const Solution &s, int v, int length);
        static int64_t segment_demand(const Solution &s, int v, int end);

        void eval_relocate_segment(Solution &s, int v, int u, double cvu, int length, Operator op, Move &best);
        void eval_cross(Solution &s, int v, int u, int lv, int lu, Operator op, Move &best);
        void apply_relocate_segment(Solution &s, const Move &move, int length);
        void apply_cross(Solution &s, const Move &move, int lv, int lu);

        // Ejection-chain search state.
        struct ChainState {
            Solution *s = nullptr;
            double base_cost = 0.0;
            double best_delta = 0.0;
            size_t root_mark = 0;
            ChangeList best_chain;
            int nodes_left = 0;
        };
        void chain_search(ChainState &state, int vertex, int from_route, int depth);

        const Instance &instance_;
        CostProvider &provider_;
        const MoveGeneratorSet &generators_;
        SparsificationState &sparsification_;
        Rng &rng_;
        LsToggles toggles_;
        bool plus_;

        std::vector<Move> heap_;
        std::vector<int> snapshot_;
        std::vector<int32_t> seg_v_, seg_u_;
        std::vector<int32_t> touched_routes_;
        std::vector<int32_t> touched_vertices_;

        uint64_t applied_ = 0;
        uint64_t evaluated_ = 0;
        uint64_t mismatches_ = 0;
    };

}  // namespace carver

#endif
