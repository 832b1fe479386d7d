#pragma once

#include <cstdint>

namespace mort {

/// SplitMix64 mixing function (Steele, Lea & Flood; public domain reference
/// constants). Bijective on 64-bit words.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based deterministic random stream.
///
/// Output i of stream (seed, stream_id) is
///     splitmix64(splitmix64(seed ^ stream_id * 0xD1B54A32D192ED03) + i)
/// so any (seed, stream_id, i) triple maps to the same word on every
/// platform, independent of call interleaving across threads. Evaluation
/// repetitions and synthetic generators each get their own stream_id.
class rng_stream {
public:
    explicit rng_stream(uint64_t seed, uint64_t stream_id = 0)
        : key_(splitmix64(seed ^ (stream_id * 0xD1B54A32D192ED03ULL))) {}

    uint64_t next() { return splitmix64(key_ + counter_++); }

    /// Uniform integer in [0, n). Rejection sampling keeps the draw unbiased;
    /// the loop terminates deterministically for a given stream position.
    uint64_t bounded(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

} // namespace mort
