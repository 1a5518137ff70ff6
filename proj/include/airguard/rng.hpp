#pragma once

// Seedable, platform-independent random number generation.
//
// Sequential streams use xoshiro256** seeded through SplitMix64. Independent
// substreams are obtained with derive_seed(parent, tag...), which folds each tag
// into the parent through the SplitMix64 finalizer. Counter-based draws
// (counter_gaussian) hash (key, counter) directly so that element i of a large
// array gets the same value regardless of evaluation order or thread count.
//
// Gaussian variates use the Box-Muller transform over 53-bit uniforms. The
// std:: distributions are not used: their output is implementation-defined.

#include <array>
#include <concepts>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "airguard/common.hpp"

namespace airguard::rng {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// FNV-1a, used to turn textual stream names into tags.
inline constexpr std::uint64_t hash_name(std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t tag_of(std::string_view name) noexcept { return hash_name(name); }

template <std::integral T>
constexpr std::uint64_t tag_of(T value) noexcept {
    return static_cast<std::uint64_t>(value);
}

/// Child seed for the substream named by `tags` (strings or integers).
template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t parent, const Tags&... tags) noexcept {
    std::uint64_t seed = parent;
    ((seed = splitmix64_mix(seed + kGolden * (splitmix64_mix(tag_of(tags)) | 1ULL))), ...);
    return seed;
}

/// Maps 64 random bits to a double in [0, 1).
inline double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            x += kGolden;
            s = splitmix64_mix(x);
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double uniform() noexcept { return to_unit(next()); }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal variate (Box-Muller; the second value is cached).
    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // 1 - u keeps the log argument in (0, 1].
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double gaussian(double mean, double variance) noexcept {
        return mean + std::sqrt(variance) * gaussian();
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Pair of independent standard normals determined only by (key, counter).
inline std::array<double, 2> counter_gaussian(std::uint64_t key, std::uint64_t counter) noexcept {
    const std::uint64_t a = splitmix64_mix(key ^ splitmix64_mix(2 * counter + 1));
    const std::uint64_t b = splitmix64_mix(a + kGolden);
    const double u1 = 1.0 - to_unit(a);
    const double u2 = to_unit(b);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace airguard::rng
