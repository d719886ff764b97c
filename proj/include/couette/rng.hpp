#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace couette {

// Counter-based stream: draw n of stream (seed) is splitmix64_mix(seed + (n+1)*0x9E3779B97F4A7C15).
// Any language with 64-bit wrapping arithmetic reproduces it.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t start = 0) : seed_(seed), counter_(start) {}

    std::uint64_t next_u64() {
        ++counter_;
        return splitmix64_mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }
    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    // integer uniform in [lo, hi]
    long integer(long lo, long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(next_u64() % span);
    }
    // Box-Muller, consumes two draws
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

// Independent sub-stream seed derived from (seed, tag).
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64_mix(seed ^ splitmix64_mix(tag + 0x632BE59BD9B4E019ULL));
}

}  // namespace couette
