#include "carver/solution.hpp"

#include <algorithm>
#include <cassert>
#include <cinttypes>
#include <cmath>
#include <sstream>

namespace carver {

    Change inverse_change(const Change &change) {
        using Kind = Change::Kind;
        switch (change.kind) {
        case Kind::Insert: return {Kind::Remove, change.vertex, change.route, change.after};
        case Kind::Remove: return {Kind::Insert, change.vertex, change.route, change.after};
        case Kind::Reverse: return {Kind::Reverse, change.after, change.route, change.vertex};
        case Kind::CreateRoute: return {Kind::RemoveRoute, 0, change.route, 0};
        case Kind::RemoveRoute: return {Kind::CreateRoute, 0, change.route, 0};
        }
        CARVER_VERIFY(false, "corrupt change record");
        return change;
    }

    Solution::Solution(const Instance &instance, CostProvider &provider, int svc_capacity)
        : instance_(&instance),
          provider_(&provider),
          pred_(instance.num_vertices(), 0),
          succ_(instance.num_vertices(), 0),
          route_of_(instance.num_vertices(), -1),
          anchored_(instance.num_vertices(), 0.0),
          svc_(svc_capacity, instance.num_vertices()),
          q_up_(instance.num_vertices(), 0),
          q_from_(instance.num_vertices(), 0),
          pos_(instance.num_vertices(), 0) { }

    int Solution::create_route() {
        int route;
        if (free_routes_.empty()) {
            route = static_cast<int>(routes_.size());
            routes_.emplace_back();
            active_pos_.push_back(-1);
        } else {
            // smallest free id, so allocation is order-deterministic
            auto it = std::min_element(free_routes_.begin(), free_routes_.end());
            route = *it;
            *it = free_routes_.back();
            free_routes_.pop_back();
        }
        Route &r = routes_[route];
        r = Route{};
        r.in_use = true;
        active_pos_[route] = static_cast<int>(active_routes_.size());
        active_routes_.push_back(route);
        record({Change::Kind::CreateRoute, 0, route, 0});
        return route;
    }

    void Solution::create_route_with_id(int route) {
        if (route == static_cast<int>(routes_.size())) {
            routes_.emplace_back();
            active_pos_.push_back(-1);
        } else {
            auto it = std::find(free_routes_.begin(), free_routes_.end(), route);
            CARVER_VERIFY(it != free_routes_.end(), "route id not free on replay");
            *it = free_routes_.back();
            free_routes_.pop_back();
        }
        Route &r = routes_[route];
        r = Route{};
        r.in_use = true;
        active_pos_[route] = static_cast<int>(active_routes_.size());
        active_routes_.push_back(route);
        record({Change::Kind::CreateRoute, 0, route, 0});
    }

    void Solution::remove_route(int route) {
        Route &r = routes_[route];
        CARVER_VERIFY(r.in_use && r.size == 0, "removing a missing or non-empty route");
        r.in_use = false;
        const int pos = active_pos_[route];
        const int moved = active_routes_.back();
        active_routes_[pos] = moved;
        active_pos_[moved] = pos;
        active_routes_.pop_back();
        active_pos_[route] = -1;
        free_routes_.push_back(route);
        record({Change::Kind::RemoveRoute, 0, route, 0});
    }

    void Solution::insert_customer(int i, int route, int after) {
        CARVER_VERIFY(i != 0 && !is_served(i), "inserting the depot or a served customer");
        Route &r = routes_[route];
        CARVER_VERIFY(r.in_use, "inserting into a missing route");
        CARVER_VERIFY(after == 0 || route_of_[after] == route, "insertion anchor not in route");

        const int next = after == 0 ? r.first : succ_[after];
        const double c_ai = arc(after, i);
        const double c_in = arc(i, next);
        const double c_an = r.size == 0 ? 0.0 : arc(after, next);

        pred_[i] = after;
        succ_[i] = next;
        if (after == 0) {
            r.first = i;
        } else {
            succ_[after] = i;
        }
        if (next == 0) {
            r.last = i;
            r.return_cost = c_in;
        } else {
            pred_[next] = i;
            anchored_[next] = c_in;
        }
        anchored_[i] = c_ai;
        route_of_[i] = route;
        r.load += instance_->demand(i);
        r.size += 1;
        r.prefix_valid = false;
        cost_ += c_ai + c_in - c_an;
        ++served_;

        touch(i);
        touch(after);
        touch(next);
        record({Change::Kind::Insert, i, route, after});
    }

    void Solution::remove_customer(int i) {
        CARVER_VERIFY(i != 0 && is_served(i), "removing the depot or an unserved customer");
        const int route = route_of_[i];
        Route &r = routes_[route];
        const int prev = pred_[i];
        const int next = succ_[i];

        const double c_pi = anchored_[i];
        const double c_in = next == 0 ? r.return_cost : anchored_[next];
        const double c_pn = r.size == 1 ? 0.0 : arc(prev, next);

        if (prev == 0) {
            r.first = next;
        } else {
            succ_[prev] = next;
        }
        if (next == 0) {
            r.last = prev;
            r.return_cost = r.size == 1 ? 0.0 : c_pn;
        } else {
            pred_[next] = prev;
            anchored_[next] = c_pn;
        }
        route_of_[i] = -1;
        r.load -= instance_->demand(i);
        r.size -= 1;
        r.prefix_valid = false;
        cost_ += c_pn - c_pi - c_in;
        --served_;

        touch(i);
        touch(prev);
        touch(next);
        record({Change::Kind::Remove, i, route, prev});
    }

    void Solution::reverse_segment(int route, int from, int to) {
        Route &r = routes_[route];
        CARVER_VERIFY(r.in_use && route_of_[from] == route && route_of_[to] == route, "reversal endpoints not in route");

        scratch_.clear();
        for (int v = from;; v = succ_[v]) {
            CARVER_VERIFY(v != 0, "reversal segment is not contiguous");
            scratch_.push_back(v);
            if (v == to) break;
        }
        const int k = static_cast<int>(scratch_.size());
        const int p = pred_[from];
        const int s = succ_[to];

        const double c_p_from = anchored_[from];
        const double c_to_s = s == 0 ? r.return_cost : anchored_[s];

        if (k > 1) {
            // Internal arcs keep their (symmetric) costs, shifted one slot.
            for (int t = 0; t < k - 1; ++t) {
                const double internal = anchored_[scratch_[t + 1]];
                pred_[scratch_[t]] = scratch_[t + 1];
                succ_[scratch_[t + 1]] = scratch_[t];
                anchored_[scratch_[t]] = internal;
            }
        }
        const double c_p_to = arc(p, to);
        const double c_from_s = arc(from, s);
        pred_[to] = p;
        succ_[from] = s;
        anchored_[to] = c_p_to;
        if (p == 0) {
            r.first = to;
        } else {
            succ_[p] = to;
        }
        if (s == 0) {
            r.last = from;
            r.return_cost = c_from_s;
        } else {
            pred_[s] = from;
            anchored_[s] = c_from_s;
        }
        r.prefix_valid = false;
        cost_ += c_p_to + c_from_s - c_p_from - c_to_s;

        touch(p);
        touch(s);
        for (const int v : scratch_) touch(v);
        record({Change::Kind::Reverse, from, route, to});
    }

    double Solution::recompute_cost() const {
        double total = 0.0;
        for (const int route : active_routes_) {
            int prev = 0;
            for (int v = routes_[route].first; v != 0; v = succ_[v]) {
                total += instance_->cost(prev, v);
                prev = v;
            }
            if (prev != 0) total += instance_->cost(prev, 0);
        }
        return total;
    }

    FeasibilityReport Solution::feasibility_report() const {
        FeasibilityReport report;
        for (int i = 1; i < instance_->num_vertices(); ++i) {
            if (!is_served(i)) report.unserved.push_back(i);
        }
        for (const int route : active_routes_) {
            if (routes_[route].load > instance_->capacity()) {
                report.overloads.emplace_back(route, routes_[route].load - instance_->capacity());
            }
        }
        return report;
    }

    void Solution::apply_change(const Change &change) {
        using Kind = Change::Kind;
        switch (change.kind) {
        case Kind::Insert: insert_customer(change.vertex, change.route, change.after); break;
        case Kind::Remove:
            CARVER_VERIFY(pred_[change.vertex] == change.after, "remove replay anchor mismatch");
            remove_customer(change.vertex);
            break;
        case Kind::Reverse: reverse_segment(change.route, change.vertex, change.after); break;
        case Kind::CreateRoute: create_route_with_id(change.route); break;
        case Kind::RemoveRoute: remove_route(change.route); break;
        }
    }

    void Solution::apply_changes(const ChangeList &changes) {
        const bool logging = logging_;
        const bool svc = svc_updates_;
        logging_ = false;
        svc_updates_ = false;
        for (const Change &change : changes) apply_change(change);
        logging_ = logging;
        svc_updates_ = svc;
    }

    void Solution::rollback_to(size_t mark) {
        const bool logging = logging_;
        const bool svc = svc_updates_;
        logging_ = false;
        svc_updates_ = false;
        while (log_.size() > mark) {
            const Change change = log_.back();
            log_.pop_back();
            apply_change(inverse_change(change));
        }
        logging_ = logging;
        svc_updates_ = svc;
    }

    void Solution::undo_log() {
        const bool logging = logging_;
        const bool svc = svc_updates_;
        logging_ = false;
        svc_updates_ = false;
        for (size_t idx = log_.size(); idx-- > 0;) {
            apply_change(inverse_change(log_[idx]));
        }
        logging_ = logging;
        svc_updates_ = svc;
    }

    void Solution::undo_changes(const ChangeList &changes) {
        const bool logging = logging_;
        const bool svc = svc_updates_;
        logging_ = false;
        svc_updates_ = false;
        for (size_t idx = changes.size(); idx-- > 0;) {
            apply_change(inverse_change(changes[idx]));
        }
        logging_ = logging;
        svc_updates_ = svc;
    }

    void Solution::ensure_prefixes(int route) {
        Route &r = routes_[route];
        if (r.prefix_valid) return;
        ++prefix_recomputes_;

        scratch_.clear();
        int64_t up = 0;
        int position = 0;
        for (int v = r.first; v != 0; v = succ_[v]) {
            up += instance_->demand(v);
            q_up_[v] = up;
            pos_[v] = position++;
            scratch_.push_back(v);
        }
        int64_t from = 0;
        for (size_t idx = scratch_.size(); idx-- > 0;) {
            from += instance_->demand(scratch_[idx]);
            q_from_[scratch_[idx]] = from;
        }
        r.prefix_valid = true;
    }

    std::string Solution::state_signature() const {
        std::ostringstream out;
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "cost=%.17g routes=%d\n", cost_, num_routes());
        out << buffer;
        std::vector<int32_t> ids(active_routes_);
        std::sort(ids.begin(), ids.end());
        for (const int route : ids) {
            out << "r" << route << " load=" << routes_[route].load << ":";
            for (int v = routes_[route].first; v != 0; v = succ_[v]) {
                std::snprintf(buffer, sizeof(buffer), " %d/%.17g", v, anchored_[v]);
                out << buffer;
            }
            std::snprintf(buffer, sizeof(buffer), " ret=%.17g\n", routes_[route].return_cost);
            out << buffer;
        }
        return out.str();
    }

    std::string to_sol(const Solution &solution) {
        std::ostringstream out;
        std::vector<int32_t> ids(solution.active_routes());
        std::sort(ids.begin(), ids.end());
        int k = 1;
        for (const int route : ids) {
            out << "Route #" << k++ << ":";
            for (int v = solution.route_first(route); v != 0; v = solution.succ(v)) {
                out << " " << v;
            }
            out << "\n";
        }
        out << "Cost " << static_cast<int64_t>(std::llround(solution.cost())) << "\n";
        return out.str();
    }

    ParsedSolution parse_sol(const std::string &text) {
        ParsedSolution parsed;
        std::istringstream in(text);
        std::string line;
        bool have_cost = false;
        while (std::getline(in, line)) {
            if (line.rfind("Route", 0) == 0) {
                const auto colon = line.find(':');
                if (colon == std::string::npos) throw ParseError("malformed route line: " + line);
                std::istringstream fields(line.substr(colon + 1));
                std::vector<int> route;
                int v;
                while (fields >> v) route.push_back(v);
                parsed.routes.push_back(std::move(route));
            } else if (line.rfind("Cost", 0) == 0) {
                std::istringstream fields(line.substr(4));
                if (!(fields >> parsed.cost)) throw ParseError("malformed cost line: " + line);
                have_cost = true;
            }
        }
        if (!have_cost) throw ParseError("solution file has no Cost line");
        return parsed;
    }

    FeasibilityReport check_routes(const Instance &instance, const std::vector<std::vector<int>> &routes) {
        FeasibilityReport report;
        std::vector<int> visits(instance.num_vertices(), 0);
        for (size_t r = 0; r < routes.size(); ++r) {
            int64_t load = 0;
            for (const int v : routes[r]) {
                if (v <= 0 || v >= instance.num_vertices()) {
                    throw ParseError("route visits unknown vertex " + std::to_string(v));
                }
                ++visits[v];
                load += instance.demand(v);
            }
            if (load > instance.capacity()) {
                report.overloads.emplace_back(static_cast<int>(r), load - instance.capacity());
            }
        }
        for (int v = 1; v < instance.num_vertices(); ++v) {
            if (visits[v] == 0) report.unserved.push_back(v);
            if (visits[v] > 1) report.duplicated.push_back(v);
        }
        return report;
    }

    double routes_cost(const Instance &instance, const std::vector<std::vector<int>> &routes) {
        double total = 0.0;
        for (const auto &route : routes) {
            int prev = 0;
            for (const int v : route) {
                total += instance.cost(prev, v);
                prev = v;
            }
            if (prev != 0) total += instance.cost(prev, 0);
        }
        return total;
    }

    Solution solution_from_routes(const Instance &instance, CostProvider &provider, const std::vector<std::vector<int>> &routes,
                                  int svc_capacity) {
        Solution solution(instance, provider, svc_capacity);
        solution.set_logging(false);
        solution.set_svc_updates(false);
        for (const auto &route : routes) {
            const int id = solution.create_route();
            int after = 0;
            for (const int v : route) {
                solution.insert_customer(v, id, after);
                after = v;
            }
        }
        solution.set_logging(true);
        solution.set_svc_updates(true);
        return solution;
    }

    std::string FeasibilityReport::to_string() const {
        std::ostringstream out;
        if (feasible()) {
            out << "feasible";
            return out.str();
        }
        if (!unserved.empty()) {
            out << "unserved:";
            for (const int v : unserved) out << " " << v;
            out << "\n";
        }
        if (!duplicated.empty()) {
            out << "duplicated:";
            for (const int v : duplicated) out << " " << v;
            out << "\n";
        }
        if (!overloads.empty()) {
            out << "overloaded routes:";
            for (const auto &[route, excess] : overloads) out << " " << route << "(+" << excess << ")";
            out << "\n";
        }
        return out.str();
    }

}  // namespace carver
