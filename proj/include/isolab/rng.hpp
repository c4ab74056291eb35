#pragma once

#include <cstdint>

namespace isolab {

/// Splittable deterministic generator (splitmix64).  Every randomized routine
/// in the library takes one of these explicitly; derived streams make
/// parallel runs independent of scheduling.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(mix(seed ^ 0x243f6a8885a308d3ULL)) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased uniform draw from [0, n).
    uint64_t below(uint64_t n) {
        if (n <= 1)
            return 0;
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold)
                return r % n;
        }
    }

    /// Independent substream indexed by `stream`; deterministic in (parent seed, stream).
    Rng split(uint64_t stream) const {
        Rng r(0);
        r.state_ = mix(state_ ^ mix(stream * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL));
        return r;
    }

    static Rng derive(uint64_t seed, uint64_t stream) { return Rng(seed).split(stream); }

  private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }

    uint64_t state_;
};

} // namespace isolab
