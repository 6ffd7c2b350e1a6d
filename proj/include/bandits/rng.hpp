// rng.hpp
#pragma once
#include <cstdint>

namespace bandits {

// Deterministic counter-based generator (splitmix64 over a keyed counter).
// Streams derived from the same seed with different stream ids are independent
// for simulation purposes and reproduce bit-identically across platforms,
// which the trace/replay tests rely on.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))), counter_(0) {}

    std::uint64_t next_u64() {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    // Uniform in [0,1): 53 mantissa bits, never returns 1.0.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Modulo bias is < 2^-53 for the n used
    // here (test-instance sizes), which is below every tolerance in the suite.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    std::uint64_t key() const { return key_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace bandits
