#pragma once

#include <array>
#include <cstdint>

namespace mia {

// Deterministic PRNG used for every randomized artifact in this project.
// The generator is pinned by algorithm, not by platform defaults, so that a
// reimplementation in any language reproduces the same networks bit for bit.
//
// Update rules (all arithmetic mod 2^64):
//
//   splitmix64(state):
//     state += 0x9e3779b97f4a1c15
//     z = state
//     z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//     z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//     return z ^ (z >> 31)
//
//   xoshiro256** with state s[0..3], rotl(x,k) = (x<<k)|(x>>(64-k)):
//     result = rotl(s[1] * 5, 7) * 9
//     t = s[1] << 17
//     s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2]; s[0] ^= s[3]
//     s[2] ^= t;    s[3] = rotl(s[3], 45)
//
// A Xoshiro256ss seeded with a single 64-bit value fills s[0..3] with four
// consecutive splitmix64 outputs starting from that value.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a1c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits: (next() >> 11) * 2^-53.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

// Per-trial seed derivation. Trial t of an experiment with master seed s uses
//
//   mix_seed(s, t) = splitmix64 finalizer of (s + (t+1) * 0x9e3779b97f4a1c15)
//
// i.e. the (t+1)-th output of a splitmix64 stream seeded with s. The mix is a
// pure function of (s, t), so trials are independent of execution order and
// can run under any parallelism degree.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t state = seed + trial * 0x9e3779b97f4a1c15ULL;
    return splitmix64_next(state);
}

}  // namespace mia
