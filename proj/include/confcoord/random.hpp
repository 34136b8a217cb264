#pragma once

#include <cstdint>
#include <random>

namespace confcoord {

/// Seeded generator whose draws depend only on the seed.
///
/// Uniform variates are formed from the raw 64-bit engine output instead of
/// std::uniform_real_distribution, whose algorithm is implementation defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

    /// Derives an independent stream for a labelled sub-task.
    std::uint64_t fork(std::uint64_t label) { return engine_() ^ (label * 0x9E3779B97F4A7C15ULL); }

private:
    std::mt19937_64 engine_;
};

} // namespace confcoord
