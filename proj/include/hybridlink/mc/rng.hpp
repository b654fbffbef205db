#pragma once

#include <cstdint>
#include <random>

namespace hybridlink::mc {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Reproducible substream: (master_seed, stream_index) fully determines the
// sequence.
struct RngStream {
    std::uint64_t master_seed = 1;
    std::uint64_t stream_index = 0;

    using engine_type = std::mt19937_64;

    engine_type engine() const {
        const std::uint64_t a = splitmix64(master_seed);
        const std::uint64_t b = splitmix64(a ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        return engine_type(seq);
    }

    RngStream child(std::uint64_t index) const { return {splitmix64(master_seed ^ splitmix64(stream_index)), index}; }
};

}  // namespace hybridlink::mc
