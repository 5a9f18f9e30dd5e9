#pragma once

// Seeded, platform-independent random streams. All Monte Carlo code derives
// per-chunk generators from (seed, chunk index) so that results are
// bit-identical regardless of thread count. Algorithms: splitmix64 for
// seeding, xoshiro256++ for the stream; uniform doubles take the top 53 bits.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace cxhyp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    // Generator for sub-stream `index` of a master seed; used to split a
    // Monte Carlo budget into deterministic chunks.
    static Xoshiro256pp for_chunk(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
        return Xoshiro256pp(splitmix64(s));
    }

    std::uint64_t next_u64() {
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

    // Uniform in [0,1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0,1]; safe as a log argument.
    double next_double_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller pair; consumes exactly two uniforms.
    std::array<double, 2> next_gaussian_pair() {
        const double u1 = next_double_pos();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    // Standard normal vector of length out.size(); consumes a fixed, even
    // number of uniforms.
    void fill_gaussian(std::span<double> out) {
        std::size_t i = 0;
        while (i + 1 < out.size()) {
            const auto pair = next_gaussian_pair();
            out[i] = pair[0];
            out[i + 1] = pair[1];
            i += 2;
        }
        if (i < out.size()) out[i] = next_gaussian_pair()[0];
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_{};
};

inline constexpr const char* kRngAlgorithm = "xoshiro256++ (splitmix64-seeded, chunk-split)";

} // namespace cxhyp
