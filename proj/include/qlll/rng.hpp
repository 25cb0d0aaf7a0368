#pragma once
// Counter-based generator: SplitMix64 over a (seed, stream) pair. Each
// trajectory or run owns one stream, so results do not depend on how work is
// split across threads.

#include <cstdint>

namespace qlll {

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    // Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n);
    // Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qlll
