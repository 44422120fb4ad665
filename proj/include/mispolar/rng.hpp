// Counter-based RNG: SplitMix64 advanced from a per-stream state.
//
// Stream k of seed s starts at splitmix(s ^ 0xD1B54A32D192ED03 * (k+1)), so
// trial k draws the same values no matter which thread runs it or in which
// order trials complete. Parallel and serial runs agree bit for bit.

#pragma once

#include <cstdint>

namespace mispolar {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        state_ = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
        splitmix64(state_);  // decorrelate adjacent streams
    }

    std::uint64_t next() { return splitmix64(state_); }

    // uniform in [0,1) with 53 random bits
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    int bit() { return static_cast<int>(next() >> 63); }

  private:
    std::uint64_t state_;
};

}  // namespace mispolar
