#pragma once

#include <cstdint>

namespace prbqkd {

/// Keyed, stateless counter-based generator built on the SplitMix64 finalizer.
///
/// `bits(c)` is a pure function of (key, c), so independent roles (Alice's
/// bits, Eve's outcomes, Bob's outcomes, losses) can each own a split stream
/// and draw by pulse index without disturbing one another. Output depends only
/// on integer arithmetic and is identical across platforms and compilers.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(mix(key ^ kSeedSalt)) {}

  [[nodiscard]] constexpr CounterRng split(std::uint64_t stream) const noexcept {
    return CounterRng(Derived{}, mix(mix(stream + kGolden) ^ key_));
  }

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + kGolden * (counter + 1));
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  [[nodiscard]] constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  struct Derived {};
  constexpr CounterRng(Derived, std::uint64_t key) noexcept : key_(key) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5EEDC0DE2024ULL;

  std::uint64_t key_;
};

/// Sequential view of a CounterRng: each call consumes the next counter.
class RandomStream {
 public:
  constexpr explicit RandomStream(CounterRng gen, std::uint64_t start = 0) noexcept
      : gen_(gen), counter_(start) {}

  std::uint64_t bits() noexcept { return gen_.bits(counter_++); }
  double uniform() noexcept { return gen_.uniform(counter_++); }
  bool bernoulli(double p) noexcept { return uniform() < p; }
  int bit() noexcept { return static_cast<int>(bits() >> 63); }

  /// Unbiased integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = bits();
    while (v >= limit) v = bits();
    return v % bound;
  }

  [[nodiscard]] std::uint64_t consumed() const noexcept { return counter_; }

 private:
  CounterRng gen_;
  std::uint64_t counter_;
};

/// Stream identifiers used by session simulation.
enum class Role : std::uint64_t {
  AliceBits = 1,
  EvePlan = 2,
  EveOutcome = 3,
  BobOutcome = 4,
  Loss = 5,
  Noise = 6,
  Keys = 7,
};

[[nodiscard]] constexpr CounterRng role_stream(const CounterRng& root, Role role) noexcept {
  return root.split(static_cast<std::uint64_t>(role));
}

}  // namespace prbqkd
