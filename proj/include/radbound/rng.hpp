#pragma once

#include <cstdint>

namespace radbound {

// Generator identity pinned in every Monte Carlo report record.
inline constexpr const char* kGeneratorId = "splitmix64-ctr-v1";

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-split key derivation: streams are a pure function of
// (seed, a, b), never of which worker consumed them.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                           std::uint64_t b = 0) {
  std::uint64_t x = mix64(seed + 0x9e3779b97f4a7c15ull);
  x = mix64(x ^ (a + 0xbf58476d1ce4e5b9ull));
  return mix64(x ^ (b + 0x94d049bb133111ebull));
}

class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  // uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::uint64_t state_;
};

// Hands out one sign per call, consuming one pseudo-random bit at a time
// from successive 64-bit words of the underlying stream.
class SignStream {
 public:
  explicit SignStream(std::uint64_t key) : rng_(key) {}

  int next_sign() {
    if (bits_left_ == 0) {
      word_ = rng_.next_u64();
      bits_left_ = 64;
    }
    const int bit = static_cast<int>(word_ & 1u);
    word_ >>= 1;
    --bits_left_;
    return bit ? 1 : -1;
  }

 private:
  Rng rng_;
  std::uint64_t word_ = 0;
  int bits_left_ = 0;
};

}  // namespace radbound
