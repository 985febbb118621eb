#pragma once

#include <cstdint>

namespace feam {

// Deterministic 64-bit generator (SplitMix64). The whole toolkit routes its
// randomness through this so that any run is replayable from a seed, which is
// exactly the implementation weakness the attack code exercises.
class DetPrng {
public:
    explicit DetPrng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

} // namespace feam
