#ifndef CARVER_MOVEGEN_HPP
#define CARVER_MOVEGEN_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "costs.hpp"
#include "instance.hpp"
#include "kdtree.hpp"

namespace carver {

    // One stored record per unordered arc {i, j}; both orientations generate
    // moves.
    struct MoveGenerator {
        int32_t i;
        int32_t j;
        double cost;

        int other(int v) const {
            return v == i ? j : i;
        }
    };

    // Sparsified arc set T: for every vertex, the arcs to its n_gs nearest
    // neighbors, deduplicated, with per-vertex incidence lists sorted by
    // ascending cost.
    class MoveGeneratorSet {
    public:
        MoveGeneratorSet(const Instance &instance, const NeighborLists &neighbors, int n_gs);

        const std::vector<MoveGenerator> &all() const {
            return generators_;
        }
        const MoveGenerator &generator(int index) const {
            return generators_[index];
        }
        int n_gs() const {
            return n_gs_;
        }
        // Incident generator indices of v, sorted by ascending arc cost.
        const int32_t *incident_begin(int v) const {
            return incident_.data() + offsets_[v];
        }
        int incident_size(int v) const {
            return static_cast<int>(offsets_[v + 1] - offsets_[v]);
        }

    private:
        int n_gs_;
        std::vector<MoveGenerator> generators_;
        std::vector<int32_t> incident_;
        std::vector<int64_t> offsets_;
    };

    struct SparsificationParams {
        double gamma_base = 0.25;
        double lambda = 2.0;
        double delta = 0.5;
        int window = 100;  // non-improving window shaped by delta
    };

    // Per-vertex dynamic sparsification factors with reset/increase schedules.
    class SparsificationState {
    public:
        SparsificationState(int num_vertices, const SparsificationParams &params)
            : params_(params),
              gamma_(num_vertices, params.gamma_base),
              non_improving_(num_vertices, 0),
              threshold_(static_cast<int>(std::ceil(params.delta * params.window))) { }

        double gamma(int v) const {
            return gamma_[v];
        }
        int threshold() const {
            return threshold_;
        }
        const SparsificationParams &params() const {
            return params_;
        }

        // Active prefix of v's incidence list: at least ceil(n_gs * gamma_base)
        // generators, scaled on the actual incident length for hub vertices.
        int active_count(int v, int incident_size, int n_gs) const {
            const int floor_count = static_cast<int>(std::ceil(n_gs * params_.gamma_base));
            const int scaled = static_cast<int>(std::ceil(incident_size * gamma_[v]));
            const int count = scaled > floor_count ? scaled : floor_count;
            return count < incident_size ? count : incident_size;
        }

        template <typename Members>
        void update(const Members &members, bool improved) {
            if (improved) {
                for (const int v : members) {
                    gamma_[v] = params_.gamma_base;
                    non_improving_[v] = 0;
                }
            } else {
                for (const int v : members) {
                    if (++non_improving_[v] >= threshold_) {
                        gamma_[v] = std::min(gamma_[v] * params_.lambda, 1.0);
                        non_improving_[v] = 0;
                    }
                }
            }
        }

        void reset_all() {
            std::fill(gamma_.begin(), gamma_.end(), params_.gamma_base);
            std::fill(non_improving_.begin(), non_improving_.end(), 0);
        }

    private:
        SparsificationParams params_;
        std::vector<double> gamma_;
        std::vector<int32_t> non_improving_;
        int threshold_;
    };

}  // namespace carver

#endif
