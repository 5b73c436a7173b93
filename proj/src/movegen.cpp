#include "carver/movegen.hpp"

#include <algorithm>
#include <stdexcept>

namespace carver {

    MoveGeneratorSet::MoveGeneratorSet(const Instance &instance, const NeighborLists &neighbors, int n_gs) : n_gs_(n_gs) {
        if (n_gs > neighbors.n_nn) throw std::invalid_argument("n_gs must not exceed n_nn");
        const int num = instance.num_vertices();

        // Collect the unordered arcs {v, u} for u among the n_gs nearest
        // neighbors of v (self excluded), deduplicated across endpoints.
        std::vector<std::pair<int32_t, int32_t>> arcs;
        for (int v = 0; v < num; ++v) {
            const int32_t *list = neighbors.begin(v);
            const int size = neighbors.size(v);
            int taken = 0;
            for (int k = 0; k < size && taken < n_gs; ++k) {
                const int u = list[k];
                if (u == v) continue;
                ++taken;
                arcs.emplace_back(std::min(v, u), std::max(v, u));
            }
        }
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

        generators_.reserve(arcs.size());
        std::vector<int32_t> degree(num, 0);
        for (const auto &[i, j] : arcs) {
            generators_.push_back({i, j, instance.cost(i, j)});
            ++degree[i];
            ++degree[j];
        }

        offsets_.assign(num + 1, 0);
        for (int v = 0; v < num; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
        incident_.resize(offsets_[num]);
        std::vector<int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (int g = 0; g < static_cast<int>(generators_.size()); ++g) {
            incident_[cursor[generators_[g].i]++] = g;
            incident_[cursor[generators_[g].j]++] = g;
        }
        for (int v = 0; v < num; ++v) {
            std::sort(incident_.begin() + offsets_[v], incident_.begin() + offsets_[v + 1], [this](int32_t a, int32_t b) {
                if (generators_[a].cost != generators_[b].cost) return generators_[a].cost < generators_[b].cost;
                if (generators_[a].i != generators_[b].i) return generators_[a].i < generators_[b].i;
                return generators_[a].j < generators_[b].j;
            });
        }
    }

}  // namespace carver
