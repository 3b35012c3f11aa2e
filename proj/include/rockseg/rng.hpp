#pragma once

// Reproducible pseudo-random stream.
//
// Algorithm (fixed, platform independent):
//   * state: xoshiro256** (Blackman & Vigna), 4 x 64-bit words
//   * seeding: the 64-bit seed is expanded with SplitMix64, four outputs
//     fill the state words in order
//   * uniform():   (next() >> 11) * 2^-53, a double in [0, 1)
//   * uniform_int(n): rejection sampling on next() against the largest
//     multiple of n below 2^64, then modulo n
//   * normal():    Box-Muller, cosine branch only; consumes exactly two
//     next() outputs: u1 = 1 - uniform(), u2 = uniform(),
//     z = sqrt(-2 ln u1) * cos(2 pi u2)
//   * substream(seed, index): SplitMix64 finalizer applied to
//     seed + (index + 1) * 0x9E3779B97F4A7C15

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rockseg {

namespace detail {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed for the independent stream number `index` derived from `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return detail::splitmix64_mix(seed + (index + 1) * kGoldenGamma);
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed) noexcept : seed_(seed)
    {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += kGoldenGamma;
            word = detail::splitmix64_mix(sm);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

    constexpr result_type next() noexcept
    {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    constexpr result_type operator()() noexcept { return next(); }

    double uniform() noexcept
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n) noexcept
    {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t r = next();
        while (r >= limit)
            r = next();
        return r % n;
    }

    double normal() noexcept
    {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Rng substream(std::uint64_t index) const noexcept
    {
        return Rng(substream_seed(seed_, index));
    }

    friend constexpr bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

} // namespace rockseg
