#ifndef SSAROOTS_RNG_HPP
#define SSAROOTS_RNG_HPP

#include <cstdint>
#include <limits>

namespace ssaroots {

///
/// SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, increment by the
/// golden-ratio constant, then a two-round xor-shift-multiply finalizer.
/// Satisfies UniformRandomBitGenerator, so it drives the std distributions.
///
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace ssaroots

#endif  // SSAROOTS_RNG_HPP
