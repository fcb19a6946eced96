// SPDX-License-Identifier: Apache-2.0

#ifndef isac_random_H
#define isac_random_H

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>

namespace isac
{
    // Mixes a 64-bit value (SplitMix64 finalizer).
    std::uint64_t mix64(std::uint64_t x);

    // Pseudo-random stream with platform-independent variates.
    //
    // All variates are built from the raw 64-bit output of std::mt19937_64, which is fully
    // specified by the standard, so a given seed gives the same numbers with any standard library.
    // Independent substreams are derived from a base seed and a key tuple, e.g.
    // (seed, drop, link, stage), so results do not depend on scheduling.
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed = 0);

        static RandomStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

        double uniform();                         // [0, 1)
        double uniform(double lo, double hi);     // [lo, hi)
        double uniform_positive();                // (0, 1], safe for log()
        double normal(double mean = 0.0, double stddev = 1.0);
        bool bernoulli(double p);
        std::size_t index(std::size_t n);         // Uniform integer in [0, n)

        template <class RandomIt>
        void shuffle(RandomIt first, RandomIt last)
        {
            auto n = static_cast<std::size_t>(last - first);
            for (std::size_t i = n; i > 1; --i)
                std::swap(first[i - 1], first[index(i)]);
        }

        std::uint64_t next_u64() { return engine_(); }

    private:
        std::mt19937_64 engine_;
        bool has_spare_ = false;
        double spare_ = 0.0;
    };
}

#endif
