#pragma once

#include <cstdint>
#include <random>

namespace obseq {

/// splitmix64 finalizer. Used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of sub-stream `stream` under root seed `root`:
///   mix64(mix64(root) + (stream + 1) * 0x9e3779b97f4a7c15)
/// Distinct streams of one root are decorrelated; the mapping is fixed so
/// that sharded runs reproduce bit-for-bit.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept {
  return mix64(mix64(root) + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Seedable, splittable generator. The engine is std::mt19937_64; all
/// derived quantities (doubles, bits) are produced here rather than through
/// <random> distributions, whose output is not specified across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent generator for sub-stream `stream`.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// One fair bit, drawn from a 64-bit buffer.
  unsigned bit() {
    if (bits_left_ == 0) {
      buffer_ = engine_();
      bits_left_ = 64;
    }
    --bits_left_;
    return static_cast<unsigned>((buffer_ >> bits_left_) & 1U);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  int bits_left_ = 0;
};

}  // namespace obseq
