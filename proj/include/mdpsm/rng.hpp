#pragma once

#include <cstdint>
#include <random>

namespace mdpsm {

/// Independent, reproducible RNG stream addressed by (seed, a, b).
/// Parallel workers derive their streams from the run seed plus logical
/// indices (SNR point, batch, ...) so results do not depend on scheduling.
inline std::mt19937_64 make_stream_rng(std::uint64_t seed, std::uint64_t a = 0,
                                       std::uint64_t b = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32),
    };
    return std::mt19937_64(seq);
}

}  // namespace mdpsm
