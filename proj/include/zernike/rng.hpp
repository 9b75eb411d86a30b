#pragma once

// Portable seeded generators. Standard-library distributions are
// implementation-defined, so node sets and wavefronts draw from these instead
// and reproduce bit-for-bit across platforms.

#include <array>
#include <cstdint>
#include <optional>

namespace zernike {

/// SplitMix64 (Steele, Lea, Flood): state += 0x9E3779B97F4A7C15, then the
/// 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB finalizer. Used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes a master seed and a stream index into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// xoshiro256** 1.0 (Blackman, Vigna). State seeded from four SplitMix64 outputs.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform();
    /// Standard normal via the Box-Muller transform; the second variate is cached.
    double normal();

private:
    std::array<std::uint64_t, 4> s_{};
    std::optional<double> spare_;
};

}  // namespace zernike
