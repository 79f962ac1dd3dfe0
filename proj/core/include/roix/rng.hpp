#pragma once

#include <array>
#include <cstdint>

namespace roix {

// All randomness in the library flows through this generator so that runs are
// reproducible bit-for-bit across platforms and so that simulator state can be
// checkpointed. Standard-library distributions are deliberately avoided: their
// output is implementation-defined.

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded via splitmix64.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  uint32_t next_below(uint32_t n) {
    // Multiply-shift map of the top 32 bits; bias is < 2^-32 and irrelevant
    // next to the determinism requirement.
    return static_cast<uint32_t>((static_cast<uint64_t>(next_u64() >> 32) * n) >> 32);
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  std::array<uint64_t, 4> state() const { return state_; }
  void set_state(const std::array<uint64_t, 4>& s) { state_ = s; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<uint64_t, 4> state_{};
};

/// Per-trial seed derivation: a pure function of (master seed, sweep point,
/// trial index), so parallel and serial sweep execution agree.
inline uint64_t mix_seed(uint64_t master, uint64_t point, uint64_t trial) {
  uint64_t s = master;
  uint64_t a = splitmix64(s) ^ (point + 0x9e3779b97f4a7c15ULL);
  uint64_t b = splitmix64(a) ^ (trial + 0xd1b54a32d192ed03ULL);
  return splitmix64(b);
}

}  // namespace roix
