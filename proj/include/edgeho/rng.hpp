#pragma once

#include <cstdint>
#include <random>

namespace edgeho {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Splittable per-trial seed derivation for independent concurrent trials.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    // Integer-uniform on [lo, hi]. Scales a single [0,1) draw, so for a fixed
    // draw the result is monotone in hi; matched-seed sweeps over c_max rely on this.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const double span = static_cast<double>(hi - lo) + 1.0;
        auto off = static_cast<std::int64_t>(next_double() * span);
        if (off > hi - lo) off = hi - lo;
        return lo + off;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace edgeho
