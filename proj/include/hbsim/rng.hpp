#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace hbsim {

// Deterministic random number generation for the simulator.
//
// Everything downstream of a seed must be bit-reproducible across platforms
// and across parallel sweep execution, so we avoid std:: distributions
// (their output is implementation-defined) and fully pin the algorithms:
//
//  * splitmix64_mix  — the SplitMix64 output function (Steele/Lea/Flood).
//  * derive_stream   — seeds independent named substreams from one root
//                      seed: derive_stream(root, salt) = mix(root + GOLDEN *
//                      (salt + 1)). Chaining derive_stream calls yields the
//                      per-run stream tree documented in stream_tag below.
//  * Rng             — xoshiro256** (Blackman/Vigna), state expanded from a
//                      64-bit seed with SplitMix64.
//  * Rng::below      — unbiased bounded integers by bitmask rejection.
//  * Rng::unit_double— 53-bit mantissa uniform in [0, 1).

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Independent substream seed for a (root, salt) pair.
constexpr std::uint64_t derive_stream(std::uint64_t root, std::uint64_t salt) {
    return splitmix64_mix(root + kGolden64 * (salt + 1));
}

// Fixed substream tags: one root seed drives the whole run, each randomized
// phase gets its own stream so phases stay independent of one another.
namespace stream_tag {
constexpr std::uint64_t kTopology = 1;
constexpr std::uint64_t kPlacement = 2;
constexpr std::uint64_t kWorkload = 3;
constexpr std::uint64_t kPush = 4;
constexpr std::uint64_t kRadius = 5;
constexpr std::uint64_t kSweep = 6;
}  // namespace stream_tag

// Per-row seed for sweep execution: mixing the axis value and repetition
// index into the root seed lets rows run on any worker in any order and
// still produce identical results.
constexpr std::uint64_t sweep_row_seed(std::uint64_t root, std::uint64_t axis_value,
                                       std::uint64_t repetition) {
    return derive_stream(derive_stream(derive_stream(root, stream_tag::kSweep), axis_value),
                         repetition);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // SplitMix64 expansion, the seeding procedure recommended for xoshiro.
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += kGolden64;
            word = splitmix64_mix(s);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = kGolden64;  // all-zero state is the lone invalid one
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound). Bitmask rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("Rng::below: bound must be positive");
        }
        if (bound == 1) {
            return 0;
        }
        const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
        for (;;) {
            const std::uint64_t candidate = next_u64() & mask;
            if (candidate < bound) {
                return candidate;
            }
        }
    }

    std::uint32_t below_u32(std::uint32_t bound) {
        return static_cast<std::uint32_t>(below(bound));
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double unit_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace hbsim
