#pragma once

// SplitMix64: a counter-based 64-bit generator (Weyl sequence plus an
// avalanching finalizer). Chosen for bit-identical reruns across platforms:
// state is two words, every draw is pure integer arithmetic, and streams
// split deterministically.
//
// Stream splitting: stream s of seed k starts from
//   state = mix(k + s * PHI)        gamma = mix(state + PHI) | 1
// where PHI is the 64-bit golden ratio and mix is the variant-13 finalizer.
// Distinct (seed, stream) pairs give independent sequences; the same pair
// always gives the same sequence.

#include <cstdint>

namespace hexmark {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0) {
    state_ = mix(seed + stream * kPhi);
    gamma_ = mix(state_ + kPhi) | 1;
  }

  std::uint64_t next() {
    state_ += gamma_;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n) by 128-bit multiply-shift; deterministic, with bias
  // below n / 2^64 (immaterial for the face counts used here).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  bool next_bool() { return (next() >> 63) != 0; }

private:
  static constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace hexmark
