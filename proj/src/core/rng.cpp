#include "wavelab/core/rng.hpp"

namespace wavelab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + kGolden) ^ mix(mix(stream + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t RandomStream::bits() {
  state_ += kGolden;
  return mix(state_);
}

}  // namespace wavelab
