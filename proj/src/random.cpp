// SPDX-License-Identifier: Apache-2.0

#include "isac/random.hpp"

#include <cmath>
#include <stdexcept>

std::uint64_t isac::mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

isac::RandomStream::RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

isac::RandomStream isac::RandomStream::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = mix64(seed);
    for (auto k : keys)
        h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
    return RandomStream(h);
}

double isac::RandomStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double isac::RandomStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double isac::RandomStream::uniform_positive()
{
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double isac::RandomStream::normal(double mean, double stddev)
{
    if (has_spare_)
    {
        has_spare_ = false;
        return mean + stddev * spare_;
    }

    // Marsaglia polar method
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);

    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return mean + stddev * u * f;
}

bool isac::RandomStream::bernoulli(double p)
{
    return uniform() < p;
}

std::size_t isac::RandomStream::index(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("Cannot draw an index from an empty range.");

    // Rejection avoids modulo bias
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do
        x = engine_();
    while (x >= limit);
    return static_cast<std::size_t>(x % range);
}
