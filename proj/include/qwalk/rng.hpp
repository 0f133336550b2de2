#pragma once

#include <cstdint>

namespace qwalk {

// Splitmix64 stream addressed by (seed, stream).  Each (seed, stream) pair is
// an independent deterministic sequence, so trial i of a Monte Carlo run can
// draw from stream i and results do not depend on execution order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    state_ = finalize(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    state_ = finalize(state_ + 0xD1B54A32D192ED03ULL);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace qwalk
