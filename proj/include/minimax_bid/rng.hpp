#pragma once

#include <cmath>
#include <cstdint>

namespace minimax_bid {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// needed so results are bit-identical across platforms and runs; std::
/// distributions are avoided because their output is implementation-defined.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    /// Standard normal via the polar method; rejection count depends only on
    /// this stream's own state.
    double next_normal() {
        for (;;) {
            const double u = 2.0 * next_double() - 1.0;
            const double v = 2.0 * next_double() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    /// Independent stream for a keyed subtask (per-draw streams and the like).
    static SplitMix64 derive(std::uint64_t seed, std::uint64_t key) {
        SplitMix64 mix(seed ^ (0x517cc1b727220a95ULL * (key + 1)));
        return SplitMix64(mix.next());
    }

  private:
    std::uint64_t state_;
};

} // namespace minimax_bid
