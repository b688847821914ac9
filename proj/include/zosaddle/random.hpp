#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace zosaddle {

/// Fully specified mixing step (splitmix64); used for seed derivation so
/// derived streams are reproducible across platforms.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derive an independent child seed from (base, tag, index).  Used by the
/// harness so every (cell, trial) pair gets its own stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
    std::uint64_t s = base ^ fnv1a64(tag);
    splitmix64_next(s);
    s ^= 0x2545f4914f6cdd1dULL * (index + 1);
    splitmix64_next(s);
    return splitmix64_next(s);
}

/// Seeded random stream with fully specified output (mt19937_64 engine,
/// hand-rolled uniform/normal transforms).  Copyable: a copy replays the
/// exact same sequence, which the determinism contracts rely on.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller; the spare half is cached in the
    /// stream state so copies stay replayable.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace zosaddle
