#pragma once

#include <cstdint>
#include <cmath>
#include <utility>

namespace eou {

// SplitMix64 finalizer, used as the mixing round of the counter-based
// generator below.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based, splittable generator. A stream is keyed by (seed, stream
// index); each draw is a pure function of (key, counter), so replicates can
// run in any order (or in parallel) and still produce identical output.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(mix64(seed ^ 0x4F1BBCDCBFA53E0AULL) + stream)) {}

    // Uniform draw in the open interval (0,1).
    double uniform(std::uint64_t counter) const {
        std::uint64_t h = mix64(key_ ^ mix64(counter + 0x2545F4914F6CDD1DULL));
        return (static_cast<double>(h >> 11) + 0.5) * 0x1p-53;
    }

    // Two independent standard normals via Box-Muller, consuming counters
    // 2*counter and 2*counter+1 of the uniform stream.
    std::pair<double, double> normal_pair(std::uint64_t counter) const {
        double u1 = uniform(2 * counter);
        double u2 = uniform(2 * counter + 1);
        double rad = std::sqrt(-2.0 * std::log(u1));
        return {rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2)};
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

} // namespace eou
