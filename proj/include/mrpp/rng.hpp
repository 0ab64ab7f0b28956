#pragma once

// Counter-based splittable RNG.  SplitMix64 steps a Weyl sequence and hashes
// the counter, so substreams can be derived by hashing a stream id into the
// seed.  Every Monte Carlo replicate draws from substream(seed, replicate),
// which makes runs reproducible regardless of execution order or thread
// count.

#include <cmath>
#include <cstdint>

namespace mrpp {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Independent substream for a given stream id under a master seed.
    // The id is hashed twice so that consecutive ids land far apart.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = mix(seed + kGamma) ^ mix(stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull);
        return SplitMix64(s);
    }

    std::uint64_t next() {
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1): never returns 0, safe for log().
    double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // Exponential with the given rate; strictly positive.
    double exponential(double rate) { return -std::log(uniform_open()) / rate; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    std::uint64_t state_;
};

} // namespace mrpp
