#ifndef CARVER_SOLUTION_HPP
#define CARVER_SOLUTION_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <string>
#include <vector>

#include "costs.hpp"
#include "instance.hpp"

// Replay or bookkeeping mismatches signal a bug, never user error: abort.
#define CARVER_VERIFY(cond, msg)                                                  \
    do {                                                                          \
        if (!(cond)) {                                                            \
            std::fprintf(stderr, "fatal: %s (%s:%d)\n", msg, __FILE__, __LINE__); \
            std::abort();                                                         \
        }                                                                         \
    } while (0)

namespace carver {

    // Primitive solution change. A single record serves both directions: the
    // do-list replays records forward, the undo-list applies their inverses in
    // reverse chronological order.
    struct Change {
        enum class Kind : uint8_t { Insert, Remove, Reverse, CreateRoute, RemoveRoute };
        Kind kind;
        int32_t vertex;  // Reverse: first vertex of the segment
        int32_t route;
        int32_t after;   // Insert/Remove: predecessor at the time of the change; Reverse: last vertex
    };

    using ChangeList = std::vector<Change>;

    Change inverse_change(const Change &change);

    // Fixed-capacity FIFO set of recently touched vertices. Re-inserting a
    // member does not refresh its position.
    class SelectiveVertexCache {
    public:
        SelectiveVertexCache(int capacity, int num_vertices) : capacity_(capacity), member_(num_vertices, 0) { }

        void insert(int v) {
            if (member_[v]) return;
            member_[v] = 1;
            fifo_.push_back(v);
            if (static_cast<int>(fifo_.size()) > capacity_) {
                member_[fifo_.front()] = 0;
                fifo_.pop_front();
            }
        }
        bool contains(int v) const {
            return member_[v] != 0;
        }
        void clear() {
            for (const int v : fifo_) member_[v] = 0;
            fifo_.clear();
        }
        int size() const {
            return static_cast<int>(fifo_.size());
        }
        int capacity() const {
            return capacity_;
        }
        const std::deque<int> &members() const {
            return fifo_;
        }

    private:
        int capacity_;
        std::deque<int> fifo_;
        std::vector<uint8_t> member_;
    };

    struct FeasibilityReport {
        std::vector<int> unserved;
        std::vector<int> duplicated;
        std::vector<std::pair<int, int64_t>> overloads;  // (route, excess load)

        bool feasible() const {
            return unserved.empty() && duplicated.empty() && overloads.empty();
        }
        std::string to_string() const;
    };

    // Working CVRP solution: intrusive linked routes over flat per-vertex
    // arrays, per-vertex anchored arc costs, maintained total cost, change log
    // for do/undo synchronization and lazy per-route cumulative-load prefixes.
    class Solution {
    public:
        Solution(const Instance &instance, CostProvider &provider, int svc_capacity);

        const Instance &instance() const {
            return *instance_;
        }
        CostProvider &provider() const {
            return *provider_;
        }

        // ----- primitives (logged, SVC-updating) -----
        int create_route();
        void create_route_with_id(int route);
        void remove_route(int route);
        void insert_customer(int i, int route, int after);
        void remove_customer(int i);
        void reverse_segment(int route, int from, int to);

        // ----- queries -----
        bool is_served(int i) const {
            return route_of_[i] >= 0;
        }
        int route_of(int i) const {
            return route_of_[i];
        }
        int pred(int i) const {
            return pred_[i];
        }
        int succ(int i) const {
            return succ_[i];
        }
        // Anchored arc cost c(pred(i), i).
        double cost_pred(int i) const {
            return anchored_[i];
        }
        // Arc cost c(i, succ(i)); falls back to the route return arc at the end.
        double cost_succ(int i) const {
            const int s = succ_[i];
            return s == 0 ? routes_[route_of_[i]].return_cost : anchored_[s];
        }
        int route_first(int route) const {
            return routes_[route].first;
        }
        int route_last(int route) const {
            return routes_[route].last;
        }
        int route_size(int route) const {
            return routes_[route].size;
        }
        int64_t route_load(int route) const {
            return routes_[route].load;
        }
        double route_return_cost(int route) const {
            return routes_[route].return_cost;
        }
        bool route_in_use(int route) const {
            return route < static_cast<int>(routes_.size()) && routes_[route].in_use;
        }
        const std::vector<int32_t> &active_routes() const {
            return active_routes_;
        }
        int num_routes() const {
            return static_cast<int>(active_routes_.size());
        }
        int num_served() const {
            return served_;
        }
        double cost() const {
            return cost_;
        }
        double recompute_cost() const;
        FeasibilityReport feasibility_report() const;

        // ----- do/undo lists -----
        ChangeList &log() {
            return log_;
        }
        const ChangeList &log() const {
            return log_;
        }
        void clear_log() {
            log_.clear();
        }
        size_t log_mark() const {
            return log_.size();
        }
        // Applies the inverses of every logged change past `mark`, newest
        // first, restoring the state the mark was taken at; truncates the log.
        void rollback_to(size_t mark);
        // Replays recorded changes forward onto this solution (logging and SVC
        // updates suppressed). Used to synchronize a replica.
        void apply_changes(const ChangeList &changes);
        // Applies the inverse of the whole log, restoring the pre-log state.
        // The log itself is left in place; the caller clears it.
        void undo_log();
        // Applies the inverses of an external change list, newest first
        // (logging and SVC updates suppressed).
        void undo_changes(const ChangeList &changes);
        void set_logging(bool enabled) {
            logging_ = enabled;
        }
        void set_svc_updates(bool enabled) {
            svc_updates_ = enabled;
        }

        // ----- selective vertex cache -----
        SelectiveVertexCache &svc() {
            return svc_;
        }
        const SelectiveVertexCache &svc() const {
            return svc_;
        }

        // ----- lazy cumulative-load prefixes -----
        // Validates the prefix arrays of `route` (recomputing only when a
        // mutation invalidated them) and exposes them per vertex.
        void ensure_prefixes(int route);
        // Unconditional recomputation, for the eager (non-lazy) ablation.
        void recompute_prefixes(int route) {
            routes_[route].prefix_valid = false;
            ensure_prefixes(route);
        }
        bool prefixes_valid(int route) const {
            return routes_[route].prefix_valid;
        }
        int64_t load_up_to(int i) const {
            return q_up_[i];
        }
        int64_t load_from(int i) const {
            return q_from_[i];
        }
        int position(int i) const {
            return pos_[i];
        }
        uint64_t prefix_recompute_count() const {
            return prefix_recomputes_;
        }

        // Full-state canonical serialization (topology, loads, anchored costs,
        // total cost); equality of two states implies bit-identical solutions.
        std::string state_signature() const;

    private:
        struct Route {
            int32_t first = 0;
            int32_t last = 0;
            int32_t size = 0;
            int64_t load = 0;
            double return_cost = 0.0;
            bool in_use = false;
            bool prefix_valid = false;
        };

        double arc(int a, int b) const {
            return a == b ? 0.0 : provider_->cost(a, b);
        }
        void touch(int v) {
            if (svc_updates_) svc_.insert(v);
        }
        void record(const Change &change) {
            if (logging_) log_.push_back(change);
        }
        void apply_change(const Change &change);

        const Instance *instance_;
        CostProvider *provider_;
        std::vector<int32_t> pred_, succ_, route_of_;
        std::vector<double> anchored_;
        std::vector<Route> routes_;
        std::vector<int32_t> free_routes_;
        std::vector<int32_t> active_routes_;
        std::vector<int32_t> active_pos_;
        double cost_ = 0.0;
        int served_ = 0;
        SelectiveVertexCache svc_;
        ChangeList log_;
        bool logging_ = true;
        bool svc_updates_ = true;
        std::vector<int64_t> q_up_, q_from_;
        std::vector<int32_t> pos_;
        uint64_t prefix_recomputes_ = 0;
        mutable std::vector<int32_t> scratch_;
    };

    // CVRPLIB .sol text: one "Route #k: i1 i2 ... im" line per route, then
    // "Cost <integer>".
    std::string to_sol(const Solution &solution);

    struct ParsedSolution {
        std::vector<std::vector<int>> routes;
        int64_t cost = 0;
    };
    ParsedSolution parse_sol(const std::string &text);

    // Feasibility and cost of an explicit route listing (for .sol validation).
    FeasibilityReport check_routes(const Instance &instance, const std::vector<std::vector<int>> &routes);
    double routes_cost(const Instance &instance, const std::vector<std::vector<int>> &routes);

    // Materializes parsed routes as a Solution.
    Solution solution_from_routes(const Instance &instance, CostProvider &provider, const std::vector<std::vector<int>> &routes,
                                  int svc_capacity);

}  // namespace carver

#endif
