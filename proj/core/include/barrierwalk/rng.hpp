#pragma once

#include <cstdint>
#include <limits>

namespace barrierwalk {

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: draw j of stream (seed, stream_id) is
// mix64(key + (j + 1) * golden), with key derived from both ids. Any trial can
// be regenerated in isolation, so results do not depend on scheduling.
// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_(mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + mix64(stream_id + 0x3c6ef372fe94f82bULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace barrierwalk
