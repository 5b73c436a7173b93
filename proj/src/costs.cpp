#include "carver/costs.hpp"

#include <stdexcept>

namespace carver {

    CostMode cost_mode_from_string(const std::string &text) {
        if (text == "on-demand") return CostMode::OnDemand;
        if (text == "on-demand+") return CostMode::OnDemandPlus;
        if (text == "cached") return CostMode::Cached;
        if (text == "cached+") return CostMode::CachedPlus;
        throw std::invalid_argument("unknown cost mode: " + text);
    }

    std::string to_string(CostMode mode) {
        switch (mode) {
        case CostMode::OnDemand: return "on-demand";
        case CostMode::OnDemandPlus: return "on-demand+";
        case CostMode::Cached: return "cached";
        case CostMode::CachedPlus: return "cached+";
        }
        return "?";
    }

    CostProvider::CostProvider(const Instance &instance, CostMode mode)
        : instance_(instance), mode_(mode), cached_(mode == CostMode::Cached || mode == CostMode::CachedPlus) {
        if (cached_) {
            size_t size = 1;
            while (size < static_cast<size_t>(instance.num_vertices())) size <<= 1;
            sig_.assign(size, -1);
            val_.assign(size, 0.0);
        }
    }

}  // namespace carver
