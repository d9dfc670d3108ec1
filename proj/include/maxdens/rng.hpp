#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace maxdens {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a hash of a string, stable across platforms and runs.
std::uint64_t stable_hash(std::string_view s);

/// Combine a parent seed with a child key into a new stream seed.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key);

/// Uniform draws on the open interval (0, 1) from a seeded 64-bit Mersenne twister.
/// The mapping from raw bits to doubles is fixed here rather than left to
/// std::uniform_real_distribution, so streams are identical across standard libraries.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double next() {
    // 53 random bits, shifted by half an ulp so that 0 and 1 are never produced
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace maxdens
