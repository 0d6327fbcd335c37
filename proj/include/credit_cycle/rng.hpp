#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace credit_cycle {

/// SplitMix64 finalizer. Used as a stateless mixing function to derive stream
/// keys from (seed, counters).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xoshiro256++ (Blackman and Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t key) {
    std::uint64_t x = key;
    for (auto& w : s_) {
      x += 0x9E3779B97F4A7C15ULL;
      w = splitmix64(x);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

/// Independent stream for the given counters under a master seed. The same
/// (seed, counters) always yields the same stream, whatever thread draws it.
inline Xoshiro256pp make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t key = splitmix64(seed);
  for (std::uint64_t c : counters) key = splitmix64(key ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
  return Xoshiro256pp(key);
}

}  // namespace credit_cycle
