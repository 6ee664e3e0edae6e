#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sisa {

// Deterministic, platform-independent random streams. Every stochastic step in the
// engine derives its stream from explicit integer keys, so a computation replayed
// with the same keys reproduces the same draws bit for bit. std::mt19937 plus the
// standard distributions would not give that guarantee across library versions.

/// splitmix64 finalizer; bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Order-sensitive fold of a value into a running hash.
inline std::uint64_t hash_fold(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Counter-based generator: state advances by a fixed odd increment and each output
/// is the mix of the new state (splitmix64). Keyed construction folds an arbitrary
/// list of tags into the starting state.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(mix64(seed ^ 0x243f6a8885a308d3ULL)) {}

    static DetRng keyed(std::initializer_list<std::uint64_t> keys) {
        std::uint64_t h = 0x452821e638d01377ULL;
        for (std::uint64_t k : keys) h = hash_fold(h, k);
        DetRng r(0);
        r.state_ = h;
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bias-free via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x < threshold);
        return x % bound;
    }

    double next_uniform(double a, double b) { return a + (b - a) * next_real(); }

    /// Standard normal via Box-Muller; two fresh uniforms per call, no cached spare.
    double next_gaussian() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        double u2 = next_real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace sisa
