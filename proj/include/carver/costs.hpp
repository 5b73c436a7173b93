#ifndef CARVER_COSTS_HPP
#define CARVER_COSTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "instance.hpp"

namespace carver {

    // How arc costs are served to the solver. The "plus" variants additionally
    // let the solver read anchored costs from the current solution and from
    // move generators; all four return identical values for every pair.
    enum class CostMode {
        OnDemand,
        OnDemandPlus,
        Cached,
        CachedPlus,
    };

    CostMode cost_mode_from_string(const std::string &text);
    std::string to_string(CostMode mode);

    // On-demand cost evaluation with an optional xor-hashed linear cache: the
    // pair (i, j) with i <= j hashes to h = i xor j; sig[h] remembers the
    // smaller endpoint, val[h] the cost. Vectors are sized to the smallest
    // power of two >= |V|, allocated only in cached modes.
    class CostProvider {
    public:
        CostProvider(const Instance &instance, CostMode mode);

        double cost(int i, int j) {
            if (!cached_) {
                ++misses_;
                return instance_.cost(i, j);
            }
            const int lo = i < j ? i : j;
            const int hi = i < j ? j : i;
            const uint32_t h = static_cast<uint32_t>(lo ^ hi);
            if (sig_[h] == lo) {
                ++hits_;
                return val_[h];
            }
            ++misses_;
            const double c = instance_.cost(lo, hi);
            sig_[h] = lo;
            val_[h] = c;
            return c;
        }

        CostMode mode() const {
            return mode_;
        }
        // Whether call sites may use costs anchored in solutions and move generators.
        bool plus() const {
            return mode_ == CostMode::OnDemandPlus || mode_ == CostMode::CachedPlus;
        }
        uint64_t hits() const {
            return hits_;
        }
        uint64_t misses() const {
            return misses_;
        }
        uint64_t queries() const {
            return hits_ + misses_;
        }
        double hit_ratio() const {
            return queries() == 0 ? 0.0 : static_cast<double>(hits_) / static_cast<double>(queries());
        }

    private:
        const Instance &instance_;
        CostMode mode_;
        bool cached_;
        std::vector<int32_t> sig_;
        std::vector<double> val_;
        uint64_t hits_ = 0;
        uint64_t misses_ = 0;
    };

}  // namespace carver

#endif
