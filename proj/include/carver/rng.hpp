#ifndef CARVER_RNG_HPP
#define CARVER_RNG_HPP

#include <cassert>
#include <cstdint>
#include <utility>

namespace carver {

    // xoshiro256** with splitmix64 seeding. The generator is pinned so that runs
    // are reproducible across platforms and standard library implementations.
    class Rng {
    public:
        explicit Rng(uint64_t seed) {
            // splitmix64 expansion of the seed into the full state.
            uint64_t x = seed;
            for (auto &word : state_) {
                x += 0x9e3779b97f4a7c15ULL;
                uint64_t z = x;
                z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
                z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
                word = z ^ (z >> 31);
            }
        }

        uint64_t next() {
            const uint64_t result = rotl(state_[1] * 5, 7) * 9;
            const uint64_t t = state_[1] << 17;
            state_[2] ^= state_[0];
            state_[3] ^= state_[1];
            state_[1] ^= state_[2];
            state_[0] ^= state_[3];
            state_[2] ^= t;
            state_[3] = rotl(state_[3], 45);
            return result;
        }

        // Uniform in [0, 1).
        double uniform() {
            return static_cast<double>(next() >> 11) * 0x1.0p-53;
        }

        // Uniform in (0, 1), safe as a log argument.
        double uniform_open() {
            return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
        }

        // Uniform integer in [lo, hi] inclusive.
        int uniform_int(int lo, int hi) {
            assert(lo <= hi);
            const uint64_t range = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1ULL;
            return lo + static_cast<int>(next() % range);
        }

        template <typename It>
        void shuffle(It first, It last) {
            const auto n = static_cast<int>(last - first);
            for (int i = n - 1; i > 0; --i) {
                const int j = uniform_int(0, i);
                std::swap(first[i], first[j]);
            }
        }

    private:
        static uint64_t rotl(uint64_t x, int k) {
            return (x << k) | (x >> (64 - k));
        }

        uint64_t state_[4];
    };

}  // namespace carver

#endif
