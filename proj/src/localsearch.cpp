#include "carver/localsearch.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace carver {

    namespace {
        constexpr double kEps = 1e-6;
        constexpr double kInf = std::numeric_limits<double>::infinity();
        constexpr int kChainDepth = 3;
        constexpr int kChainFanout = 2;
        constexpr int kChainBudget = 12;

        bool symmetric_operator(Operator op) {
            return op == Operator::Exchange11 || op == Operator::TwoOpt || op == Operator::Split ||
                   op == Operator::Cross22 || op == Operator::Cross33;
        }
    }  // namespace

    LocalSearch::LocalSearch(const Instance &instance, CostProvider &provider, const MoveGeneratorSet &generators,
                             SparsificationState &sparsification, Rng &rng, const LsToggles &toggles)
        : instance_(instance),
          provider_(provider),
          generators_(generators),
          sparsification_(sparsification),
          rng_(rng),
          toggles_(toggles),
          plus_(provider.plus()) { }

    int LocalSearch::segment_end(const Solution &s, int v, int length) {
        int end = v;
        for (int t = 1; t < length; ++t) {
            end = s.succ(end);
            if (end == 0) return -1;
        }
        return end;
    }

    int64_t LocalSearch::segment_demand(const Solution &s, int v, int end) {
        int64_t demand = 0;
        for (int w = v;; w = s.succ(w)) {
            demand += s.instance().demand(w);
            if (w == end) break;
        }
        return demand;
    }

    // Min-delta heap; ties resolved on (v, u, variant) for determinism.
    void LocalSearch::heap_push(const Move &move) {
        heap_.push_back(move);
        std::push_heap(heap_.begin(), heap_.end(), [](const Move &a, const Move &b) {
            return std::tie(a.delta, a.v, a.u, a.variant) > std::tie(b.delta, b.v, b.u, b.variant);
        });
    }

    LocalSearch::Move LocalSearch::heap_pop() {
        std::pop_heap(heap_.begin(), heap_.end(), [](const Move &a, const Move &b) {
            return std::tie(a.delta, a.v, a.u, a.variant) > std::tie(b.delta, b.v, b.u, b.variant);
        });
        const Move move = heap_.back();
        heap_.pop_back();
        return move;
    }

    double LocalSearch::descend(Solution &solution) {
        const double start = solution.cost();
        std::array<std::vector<Operator>, 3> tiers = {
            std::vector<Operator>{Operator::Relocate1, Operator::Exchange11, Operator::TwoOpt, Operator::Tail,
                                  Operator::Split},
            std::vector<Operator>{Operator::Cross21, Operator::Cross22, Operator::Relocate2},
            std::vector<Operator>{Operator::Relocate3, Operator::Cross33, Operator::EjectionChain},
        };
        for (std::vector<Operator> &tier : tiers) rng_.shuffle(tier.begin(), tier.end());

        bool improved;
        do {
            improved = false;
            for (const std::vector<Operator> &tier : tiers) {
                bool tier_improved;
                do {
                    tier_improved = false;
                    for (const Operator op : tier) {
                        if (run_operator(solution, op)) tier_improved = true;
                    }
                    improved = improved || tier_improved;
                } while (tier_improved && toggles_.rvnd_inner_loop);
            }
        } while (improved);
        return start - solution.cost();
    }

    bool LocalSearch::run_operator(Solution &s, Operator op) {
        if (op == Operator::EjectionChain) return run_ejection_chains(s);

        // Non-lazy ablation: precompute the cumulative loads of every customer
        // whenever a load-dependent neighborhood is explored, instead of
        // refreshing only the routes a move actually touches.
        if (!toggles_.lazy_loads && (op == Operator::Tail || op == Operator::Split)) {
            for (const int r : s.active_routes()) s.recompute_prefixes(r);
        }

        heap_.clear();
        snapshot_.assign(s.svc().members().begin(), s.svc().members().end());
        for (const int v : snapshot_) {
            if (v == 0 || !s.is_served(v)) continue;
            push_candidates(s, op, v);
        }

        bool any = false;
        while (!heap_.empty()) {
            const Move move = heap_pop();
            if (!s.is_served(move.v) || !s.is_served(move.u)) continue;
            // Lazy re-validation: recompute against the current solution and
            // execute only a descriptor that is still the stored best.
            const Move fresh = evaluate(s, op, move.v, move.u, move.gen_cost);
            if (fresh.v == 0) continue;
            if (fresh.delta != move.delta || fresh.variant != move.variant || fresh.v != move.v || fresh.u != move.u) {
                heap_push(fresh);
                continue;
            }
            apply(s, fresh);
            any = true;
            for (const int t : touched_vertices_) {
                if (t == 0 || !s.is_served(t) || !s.svc().contains(t)) continue;
                push_candidates(s, op, t);
            }
        }
        return any;
    }

    void LocalSearch::push_candidates(Solution &s, Operator op, int v) {
        const int size = generators_.incident_size(v);
        const int active = sparsification_.active_count(v, size, generators_.n_gs());
        const int32_t *incident = generators_.incident_begin(v);
        const bool symmetric = symmetric_operator(op);
        for (int t = 0; t < active; ++t) {
            const MoveGenerator &g = generators_.generator(incident[t]);
            const int u = g.other(v);
            if (u == 0 || !s.is_served(u)) continue;
            // A symmetric move is examined once when both endpoints are cached.
            if (symmetric && u < v && s.svc().contains(u)) continue;
            const Move move = evaluate(s, op, v, u, g.cost);
            if (move.v != 0) heap_push(move);
        }
    }

    LocalSearch::Move LocalSearch::evaluate(Solution &s, Operator op, int v, int u, double gen_cost) {
        ++evaluated_;
        Move best{op, -kEps, 0, 0, 0, gen_cost};
        const double cvu = plus_ ? gen_cost : arc(v, u);

        switch (op) {
        case Operator::Relocate1: eval_relocate_segment(s, v, u, cvu, 1, op, best); return best;
        case Operator::Relocate2: eval_relocate_segment(s, v, u, cvu, 2, op, best); return best;
        case Operator::Relocate3: eval_relocate_segment(s, v, u, cvu, 3, op, best); return best;
        case Operator::Cross21: eval_cross(s, v, u, 2, 1, op, best); return best;
        case Operator::Cross22: eval_cross(s, v, u, 2, 2, op, best); return best;
        case Operator::Cross33: eval_cross(s, v, u, 3, 3, op, best); return best;
        default: break;
        }

        const int rv = s.route_of(v);
        const int ru = s.route_of(u);
        const int64_t capacity = instance_.capacity();

        if (op == Operator::Exchange11) {
            if (rv != ru) {
                if (s.route_load(rv) - instance_.demand(v) + instance_.demand(u) > capacity) return best;
                if (s.route_load(ru) - instance_.demand(u) + instance_.demand(v) > capacity) return best;
            }
            double delta;
            if (s.succ(v) == u) {
                delta = arc(s.pred(v), u) + arc(v, s.succ(u)) - cost_before(s, v) - cost_after(s, u);
            } else if (s.succ(u) == v) {
                delta = arc(s.pred(u), v) + arc(u, s.succ(v)) - cost_before(s, u) - cost_after(s, v);
            } else {
                delta = arc(s.pred(v), u) + arc(u, s.succ(v)) - cost_before(s, v) - cost_after(s, v) +
                        arc(s.pred(u), v) + arc(v, s.succ(u)) - cost_before(s, u) - cost_after(s, u);
            }
            if (delta < best.delta) best = {op, delta, static_cast<int32_t>(v), static_cast<int32_t>(u), 0, gen_cost};
            return best;
        }

        if (op == Operator::TwoOpt) {
            if (rv != ru) return best;
            s.ensure_prefixes(rv);
            const int i = s.position(v) < s.position(u) ? v : u;
            const int j = i == v ? u : v;
            const double delta = cvu + arc(s.succ(i), s.succ(j)) - cost_after(s, i) - cost_after(s, j);
            if (delta < best.delta) best = {op, delta, static_cast<int32_t>(i), static_cast<int32_t>(j), 0, gen_cost};
            return best;
        }

        if (op == Operator::Tail) {
            if (rv == ru) return best;
            s.ensure_prefixes(rv);
            s.ensure_prefixes(ru);
            const int64_t tail_v = s.load_from(v);
            const int64_t head_u = s.load_up_to(u);
            if (head_u + tail_v > capacity) return best;
            if (s.route_load(rv) - tail_v + s.route_load(ru) - head_u > capacity) return best;
            const double delta = cvu + arc(s.pred(v), s.succ(u)) - cost_before(s, v) - cost_after(s, u);
            if (delta < best.delta) best = {op, delta, static_cast<int32_t>(v), static_cast<int32_t>(u), 0, gen_cost};
            return best;
        }

        // Split
        if (rv == ru) return best;
        s.ensure_prefixes(rv);
        s.ensure_prefixes(ru);
        const int64_t head_v = s.load_up_to(v);
        const int64_t head_u = s.load_up_to(u);
        if (head_v + head_u > capacity) return best;
        if (s.route_load(rv) - head_v + s.route_load(ru) - head_u > capacity) return best;
        const double delta = cvu + arc(s.succ(v), s.succ(u)) - cost_after(s, v) - cost_after(s, u);
        if (delta < best.delta) best = {op, delta, static_cast<int32_t>(v), static_cast<int32_t>(u), 0, gen_cost};
        return best;
    }

    void LocalSearch::eval_relocate_segment(Solution &s, int v, int u, double cvu, int length, Operator /*op*/,
                                            Move &best) {
        const int end = segment_end(s, v, length);
        if (end < 0) return;
        for (int w = v;; w = s.succ(w)) {
            if (w == u) return;  // target inside the segment
            if (w == end) break;
        }
        const int rv = s.route_of(v);
        const int ru = s.route_of(u);
        if (rv != ru && s.route_load(ru) + segment_demand(s, v, end) > instance_.capacity()) return;

        const int pv = s.pred(v);
        const int s_end = s.succ(end);
        const double closing = arc(pv, s_end);
        const double removal = closing - cost_before(s, v) - cost_after(s, end);

        // After u: the segment lands between u and its (post-removal) successor.
        const int b = u == pv ? s_end : s.succ(u);
        const double after_base = u == pv ? closing : cost_after(s, u);
        const double after_fwd = removal + cvu + arc(end, b) - after_base;
        if (after_fwd < best.delta) {
            best.delta = after_fwd;
            best.v = v;
            best.u = u;
            best.variant = 0;
        }
        if (length > 1) {
            const double after_rev = removal + arc(u, end) + arc(v, b) - after_base;
            if (after_rev < best.delta) {
                best.delta = after_rev;
                best.v = v;
                best.u = u;
                best.variant = 1;
            }
        }

        // Before u: between u's (post-removal) predecessor and u.
        const int a = u == s_end ? pv : s.pred(u);
        const double before_base = u == s_end ? closing : cost_before(s, u);
        const double end_u = length == 1 ? cvu : arc(end, u);
        const double before_fwd = removal + arc(a, v) + end_u - before_base;
        if (before_fwd < best.delta) {
            best.delta = before_fwd;
            best.v = v;
            best.u = u;
            best.variant = 2;
        }
        if (length > 1) {
            const double before_rev = removal + arc(a, end) + cvu - before_base;
            if (before_rev < best.delta) {
                best.delta = before_rev;
                best.v = v;
                best.u = u;
                best.variant = 3;
            }
        }
    }

    void LocalSearch::eval_cross(Solution &s, int v, int u, int lv, int lu, Operator op, Move &best) {
        (void)op;
        const int rv = s.route_of(v);
        const int ru = s.route_of(u);
        if (rv == ru) return;
        const int endv = segment_end(s, v, lv);
        const int endu = segment_end(s, u, lu);
        if (endv < 0 || endu < 0) return;

        const int64_t demv = segment_demand(s, v, endv);
        const int64_t demu = segment_demand(s, u, endu);
        if (s.route_load(rv) - demv + demu > instance_.capacity()) return;
        if (s.route_load(ru) - demu + demv > instance_.capacity()) return;

        const int pv = s.pred(v);
        const int pu = s.pred(u);
        const double removed = cost_before(s, v) + cost_after(s, endv) + cost_before(s, u) + cost_after(s, endu);
        const int sv = s.succ(endv);
        const int su = s.succ(endu);

        const double u_fwd = arc(pv, u) + arc(endu, sv);
        const double u_rev = lu > 1 ? arc(pv, endu) + arc(u, sv) : kInf;
        const double v_fwd = arc(pu, v) + arc(endv, su);
        const double v_rev = lv > 1 ? arc(pu, endv) + arc(v, su) : kInf;

        const double combos[4] = {u_fwd + v_fwd, u_rev + v_fwd, u_fwd + v_rev, u_rev + v_rev};
        for (int variant = 0; variant < 4; ++variant) {
            if (combos[variant] == kInf) continue;
            const double delta = combos[variant] - removed;
            if (delta < best.delta) {
                best.delta = delta;
                best.v = v;
                best.u = u;
                best.variant = variant;
            }
        }
    }

    void LocalSearch::apply(Solution &s, const Move &move) {
        const double before = s.cost();
        touched_routes_.clear();
        touched_vertices_.clear();
        switch (move.op) {
        case Operator::Relocate1: apply_relocate_segment(s, move, 1); break;
        case Operator::Relocate2: apply_relocate_segment(s, move, 2); break;
        case Operator::Relocate3: apply_relocate_segment(s, move, 3); break;
        case Operator::Cross21: apply_cross(s, move, 2, 1); break;
        case Operator::Cross22: apply_cross(s, move, 2, 2); break;
        case Operator::Cross33: apply_cross(s, move, 3, 3); break;
        case Operator::Exchange11: {
            const int v = move.v, u = move.u;
            touched_routes_.push_back(s.route_of(v));
            touched_routes_.push_back(s.route_of(u));
            touched_vertices_.insert(touched_vertices_.end(),
                                     {move.v, move.u, s.pred(v), s.succ(v), s.pred(u), s.succ(u)});
            if (s.succ(v) == u) {
                s.remove_customer(v);
                s.insert_customer(v, s.route_of(u), u);
            } else if (s.succ(u) == v) {
                s.remove_customer(u);
                s.insert_customer(u, s.route_of(v), v);
            } else {
                const int rv = s.route_of(v), ru = s.route_of(u);
                const int pv = s.pred(v), pu = s.pred(u);
                s.remove_customer(v);
                s.remove_customer(u);
                s.insert_customer(u, rv, pv);
                s.insert_customer(v, ru, pu);
            }
            break;
        }
        case Operator::TwoOpt: {
            const int r = s.route_of(move.v);
            touched_routes_.push_back(r);
            touched_vertices_.push_back(move.v);
            for (int w = s.succ(move.v);; w = s.succ(w)) {
                touched_vertices_.push_back(w);
                if (w == move.u) break;
            }
            touched_vertices_.push_back(s.succ(move.u));
            s.reverse_segment(r, s.succ(move.v), move.u);
            break;
        }
        case Operator::Tail: {
            const int v = move.v, u = move.u;
            const int rv = s.route_of(v), ru = s.route_of(u);
            touched_routes_.push_back(rv);
            touched_routes_.push_back(ru);
            const int pv = s.pred(v);
            seg_v_.clear();
            for (int w = v; w != 0; w = s.succ(w)) seg_v_.push_back(w);
            seg_u_.clear();
            for (int w = s.succ(u); w != 0; w = s.succ(w)) seg_u_.push_back(w);
            touched_vertices_.push_back(pv);
            touched_vertices_.push_back(u);
            touched_vertices_.insert(touched_vertices_.end(), seg_v_.begin(), seg_v_.end());
            touched_vertices_.insert(touched_vertices_.end(), seg_u_.begin(), seg_u_.end());
            for (const int w : seg_v_) s.remove_customer(w);
            for (const int w : seg_u_) s.remove_customer(w);
            int after = u;
            for (const int w : seg_v_) {
                s.insert_customer(w, ru, after);
                after = w;
            }
            after = pv;
            for (const int w : seg_u_) {
                s.insert_customer(w, rv, after);
                after = w;
            }
            if (s.route_size(rv) == 0) s.remove_route(rv);
            break;
        }
        case Operator::Split: {
            const int v = move.v, u = move.u;
            const int rv = s.route_of(v), ru = s.route_of(u);
            touched_routes_.push_back(rv);
            touched_routes_.push_back(ru);
            seg_u_.clear();  // head of u's route, depot side first
            for (int w = s.route_first(ru);; w = s.succ(w)) {
                seg_u_.push_back(w);
                if (w == u) break;
            }
            seg_v_.clear();  // tail of v's route
            for (int w = s.succ(v); w != 0; w = s.succ(w)) seg_v_.push_back(w);
            touched_vertices_.push_back(v);
            touched_vertices_.insert(touched_vertices_.end(), seg_v_.begin(), seg_v_.end());
            touched_vertices_.insert(touched_vertices_.end(), seg_u_.begin(), seg_u_.end());
            for (const int w : seg_v_) s.remove_customer(w);
            for (const int w : seg_u_) s.remove_customer(w);
            int after = v;
            for (size_t idx = seg_u_.size(); idx-- > 0;) {
                s.insert_customer(seg_u_[idx], rv, after);
                after = seg_u_[idx];
            }
            after = 0;
            for (size_t idx = seg_v_.size(); idx-- > 0;) {
                s.insert_customer(seg_v_[idx], ru, after);
                after = seg_v_[idx];
            }
            if (s.route_size(ru) == 0) s.remove_route(ru);
            break;
        }
        case Operator::EjectionChain: break;  // applied by run_ejection_chains
        }
        ++applied_;
        if (s.cost() - before != move.delta) ++mismatches_;
    }

    void LocalSearch::apply_relocate_segment(Solution &s, const Move &move, int length) {
        const int v = move.v, u = move.u;
        const int rv = s.route_of(v);
        const int ru = s.route_of(u);
        touched_routes_.push_back(rv);
        touched_routes_.push_back(ru);
        seg_v_.clear();
        for (int w = v, t = 0; t < length; ++t, w = s.succ(w)) seg_v_.push_back(w);
        touched_vertices_.insert(touched_vertices_.end(),
                                 {s.pred(v), s.succ(seg_v_.back()), move.u, s.pred(u), s.succ(u)});
        touched_vertices_.insert(touched_vertices_.end(), seg_v_.begin(), seg_v_.end());
        for (const int w : seg_v_) s.remove_customer(w);
        const bool reversed = move.variant == 1 || move.variant == 3;
        const bool before = move.variant >= 2;
        int after = before ? s.pred(u) : u;
        if (reversed) std::reverse(seg_v_.begin(), seg_v_.end());
        for (const int w : seg_v_) {
            s.insert_customer(w, ru, after);
            after = w;
        }
        if (rv != ru && s.route_size(rv) == 0) s.remove_route(rv);
    }

    void LocalSearch::apply_cross(Solution &s, const Move &move, int lv, int lu) {
        const int v = move.v, u = move.u;
        const int rv = s.route_of(v);
        const int ru = s.route_of(u);
        touched_routes_.push_back(rv);
        touched_routes_.push_back(ru);
        const int pv = s.pred(v);
        const int pu = s.pred(u);
        seg_v_.clear();
        for (int w = v, t = 0; t < lv; ++t, w = s.succ(w)) seg_v_.push_back(w);
        seg_u_.clear();
        for (int w = u, t = 0; t < lu; ++t, w = s.succ(w)) seg_u_.push_back(w);
        touched_vertices_.insert(touched_vertices_.end(),
                                 {pv, pu, s.succ(seg_v_.back()), s.succ(seg_u_.back())});
        touched_vertices_.insert(touched_vertices_.end(), seg_v_.begin(), seg_v_.end());
        touched_vertices_.insert(touched_vertices_.end(), seg_u_.begin(), seg_u_.end());
        for (const int w : seg_v_) s.remove_customer(w);
        for (const int w : seg_u_) s.remove_customer(w);
        if (move.variant & 1) std::reverse(seg_u_.begin(), seg_u_.end());
        if (move.variant & 2) std::reverse(seg_v_.begin(), seg_v_.end());
        int after = pv;
        for (const int w : seg_u_) {
            s.insert_customer(w, rv, after);
            after = w;
        }
        after = pu;
        for (const int w : seg_v_) {
            s.insert_customer(w, ru, after);
            after = w;
        }
    }

    void LocalSearch::chain_search(ChainState &state, int vertex, int from_route, int depth) {
        Solution &s = *state.s;
        const int size = generators_.incident_size(vertex);
        const int active = sparsification_.active_count(vertex, size, generators_.n_gs());
        const int32_t *incident = generators_.incident_begin(vertex);
        int targets[kChainFanout];
        int anchors[kChainFanout];
        int num_targets = 0;
        for (int t = 0; t < active && num_targets < kChainFanout; ++t) {
            const int u = generators_.generator(incident[t]).other(vertex);
            if (u == 0 || !s.is_served(u)) continue;
            const int target = s.route_of(u);
            if (target == from_route) continue;
            bool seen = false;
            for (int k = 0; k < num_targets; ++k) seen = seen || targets[k] == target;
            if (seen) continue;
            targets[num_targets] = target;
            anchors[num_targets] = u;
            ++num_targets;
        }

        for (int k = 0; k < num_targets; ++k) {
            if (state.nodes_left <= 0) return;
            --state.nodes_left;
            const int target = targets[k];
            const int u = anchors[k];

            // Insertion next to the neighbor that selected this route: either
            // immediately before or immediately after u, whichever is cheaper.
            const int pu = s.pred(u);
            const double din_before =
                arc(pu, vertex) + arc(vertex, u) - (plus_ ? s.cost_pred(u) : arc(pu, u));
            const int su = s.succ(u);
            const double din_after =
                arc(u, vertex) + arc(vertex, su) - (plus_ ? s.cost_succ(u) : arc(u, su));
            const int best_after = din_before <= din_after ? pu : u;

            const size_t mark = s.log_mark();
            s.insert_customer(vertex, target, best_after);
            if (s.route_load(target) <= instance_.capacity()) {
                const double delta = s.cost() - state.base_cost;
                if (delta < state.best_delta) {
                    state.best_delta = delta;
                    state.best_chain.assign(s.log().begin() + state.root_mark, s.log().end());
                }
            } else if (depth > 1) {
                const int64_t excess = s.route_load(target) - instance_.capacity();
                std::vector<int> candidates;  // local: the recursion shares no scratch
                for (int w = s.route_first(target); w != 0; w = s.succ(w)) {
                    if (w != vertex) candidates.push_back(w);
                }
                for (const int y : candidates) {
                    if (state.nodes_left <= 0) break;
                    // the ejection must restore feasibility of this route
                    if (instance_.demand(y) < excess) continue;
                    --state.nodes_left;
                    const size_t eject_mark = s.log_mark();
                    s.remove_customer(y);
                    chain_search(state, y, target, depth - 1);
                    s.rollback_to(eject_mark);
                }
            }
            s.rollback_to(mark);
        }
    }

    bool LocalSearch::run_ejection_chains(Solution &s) {
        bool any = false;
        for (;;) {
            double best_delta = -kEps;
            ChangeList best_chain;
            snapshot_.assign(s.svc().members().begin(), s.svc().members().end());
            for (const int v : snapshot_) {
                if (v == 0 || !s.is_served(v)) continue;
                ChainState state;
                state.s = &s;
                state.base_cost = s.cost();
                state.best_delta = best_delta;
                state.root_mark = s.log_mark();
                state.nodes_left = kChainBudget;
                const int rv = s.route_of(v);
                const size_t mark = s.log_mark();
                s.remove_customer(v);
                chain_search(state, v, rv, kChainDepth);
                s.rollback_to(mark);
                ++evaluated_;
                if (state.best_delta < best_delta) {
                    best_delta = state.best_delta;
                    best_chain = std::move(state.best_chain);
                }
            }
            if (best_chain.empty()) break;

            const double before = s.cost();
            touched_routes_.clear();
            for (const Change &change : best_chain) {
                touched_routes_.push_back(change.route);
                if (change.kind == Change::Kind::Insert) {
                    s.insert_customer(change.vertex, change.route, change.after);
                } else {
                    CARVER_VERIFY(change.kind == Change::Kind::Remove, "unexpected change in ejection chain");
                    CARVER_VERIFY(s.pred(change.vertex) == change.after, "ejection chain replay anchor mismatch");
                    s.remove_customer(change.vertex);
                }
            }
            std::sort(touched_routes_.begin(), touched_routes_.end());
            touched_routes_.erase(std::unique(touched_routes_.begin(), touched_routes_.end()), touched_routes_.end());
            for (const int r : touched_routes_) {
                if (s.route_in_use(r) && s.route_size(r) == 0) s.remove_route(r);
            }
            ++applied_;
            if (s.cost() - before != best_delta) ++mismatches_;
            any = true;
        }
        return any;
    }

}  // namespace carver
