#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace trustlink {

// SplitMix64 finalizer; used to derive independent stream seeds from
// (master seed, index) pairs so results do not depend on scheduling.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(seed ^ mix64(stream));
}

// xoshiro256++ with a fixed cross-platform bit stream. All randomness in the
// library flows through explicit Rng handles; there is no global state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& s : state_) s = (x = mix64(x));
    }

    static Rng derived(std::uint64_t seed, std::uint64_t stream) noexcept {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    std::uint32_t next_u32() noexcept { return static_cast<std::uint32_t>(next_u64() >> 32); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) noexcept { return next_u64() % bound; }

    // Standard normal via Box-Muller; second value cached.
    double gaussian() noexcept {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    void fill_bytes(std::uint8_t* out, std::size_t len) noexcept {
        std::size_t i = 0;
        while (i + 8 <= len) {
            std::uint64_t v = next_u64();
            for (int b = 0; b < 8; ++b) out[i++] = static_cast<std::uint8_t>(v >> (8 * b));
        }
        if (i < len) {
            std::uint64_t v = next_u64();
            while (i < len) {
                out[i++] = static_cast<std::uint8_t>(v);
                v >>= 8;
            }
        }
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace trustlink
