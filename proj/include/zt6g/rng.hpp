#pragma once

#include <cstdint>
#include <random>

namespace zt6g {

using Rng = std::mt19937_64;

/// Named substreams of a run seed. Appending a stream never perturbs the
/// existing ones.
enum class Stream : std::uint32_t { Traffic = 1, Epidemic = 2, Tpss = 3, Engine = 4 };

inline Rng make_stream(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x7A36u};
    return Rng(seq);
}

}  // namespace zt6g
