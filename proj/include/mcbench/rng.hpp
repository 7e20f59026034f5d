#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace mcbench {

/// Mixes two 64-bit values into a stream key (splitmix64 finalizer).
/// Used to derive independent streams from (seed, ordinal) pairs so that
/// parallel and serial runs draw identical numbers.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ull * (b + 0x632be59bd9b4e019ull);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// FNV-1a 64-bit hash. Stable across platforms; used to key per-sample
/// random streams from sample ids.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Deterministic splitmix64 random stream. All draws are defined in terms of
/// exact integer arithmetic, so sequences are bit-identical across platforms
/// (std::uniform_real_distribution and friends are not).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) : state_(key) {}

    /// Stream for (seed, ordinal), e.g. one stream per sample or per vertex.
    static RandomStream keyed(std::uint64_t seed, std::uint64_t ordinal) {
        return RandomStream(mix64(seed, ordinal));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). Throws unless n is positive.
    int next_index(int n) {
        if (n <= 0) throw std::invalid_argument("next_index: n must be positive");
        int i = static_cast<int>(next_unit() * n);
        return i < n ? i : n - 1;
    }

    /// Standard normal deviate via Box-Muller; spare values are cached so a
    /// stream yields the same sequence regardless of call grouping.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mcbench
