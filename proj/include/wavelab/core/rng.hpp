#pragma once

#include <cstdint>

namespace wavelab {

/// Random stream derived from (seed, stream id). Streams for different ids are
/// independent, so per-particle draws do not depend on scheduling.
///
/// SplitMix64: construction is a couple of multiplies, which matters when every
/// particle of a 1e5 ensemble owns a stream. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  std::uint64_t bits();
  std::uint64_t operator()() { return bits(); }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

}  // namespace wavelab
