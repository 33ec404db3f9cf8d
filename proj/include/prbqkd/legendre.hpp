#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace prbqkd {

/// (base^exp) mod m with 128-bit intermediates; m > 0.
[[nodiscard]] std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
[[nodiscard]] bool is_prime_u64(std::uint64_t n);

/// Public PRNG modulus: a prime L with L ≡ 3 (mod 4).
class LegendrePrime {
 public:
  /// Throws ParameterError unless L is a prime congruent to 3 mod 4.
  explicit LegendrePrime(std::uint64_t L);

  [[nodiscard]] std::uint64_t value() const noexcept { return value_; }

  /// Bits needed to write a key in [0, L): ceil(log2 L).
  [[nodiscard]] int key_bits() const noexcept { return key_bits_; }

  /// Residue of any signed integer in [0, L).
  [[nodiscard]] std::uint64_t reduce(std::int64_t i) const noexcept;

  /// ā_i with a lookup table when one was built, otherwise by Euler's criterion.
  [[nodiscard]] int sequence_bit(std::uint64_t residue) const noexcept;

  /// Materializes ā_0..ā_{L-1} for fast lookups; no-op above 2^24.
  void build_table();
  [[nodiscard]] bool has_table() const noexcept { return table_ != nullptr; }

  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 24;

  friend bool operator==(const LegendrePrime& a, const LegendrePrime& b) noexcept {
    return a.value_ == b.value_;
  }

 private:
  std::uint64_t value_;
  int key_bits_;
  std::shared_ptr<const std::vector<std::uint8_t>> table_;
};

/// Discrete angle in units of π/(2M). Basis angles live in [0, M); prepared
/// state angles (basis plus xπ/2) live in [0, 2M).
struct AngleIndex {
  std::uint32_t value = 0;
  auto operator<=>(const AngleIndex&) const = default;
};

/// Angle in radians for an index on the π/(2M) grid.
[[nodiscard]] double to_radians(AngleIndex a, std::uint32_t basis_count) noexcept;

/// The m per-register seeds k^(1..m), each in [0, L).
class RegisterKeySet {
 public:
  RegisterKeySet(std::vector<std::uint64_t> keys, const LegendrePrime& prime);

  [[nodiscard]] std::span<const std::uint64_t> keys() const noexcept { return keys_; }
  [[nodiscard]] std::uint64_t key(int register_index) const;  // 1-based
  [[nodiscard]] int register_count() const noexcept { return static_cast<int>(keys_.size()); }
  [[nodiscard]] std::uint32_t basis_count() const noexcept { return 1u << keys_.size(); }
  [[nodiscard]] int subkey_bits() const noexcept { return subkey_bits_; }
  [[nodiscard]] int key_bits() const noexcept { return subkey_bits_ * register_count(); }

  friend bool operator==(const RegisterKeySet&, const RegisterKeySet&) = default;

 private:
  std::vector<std::uint64_t> keys_;
  int subkey_bits_;
};

/// Euler's criterion: x^((L-1)/2) ≡ 1 (mod L) and x ≢ 0.
[[nodiscard]] bool is_quadratic_residue(std::int64_t x, const LegendrePrime& prime);

/// ā_i: 1 iff i is a nonzero quadratic residue mod L.
[[nodiscard]] int legendre_bit(std::int64_t i, const LegendrePrime& prime);

/// a_i(k) = ā_{k+i}; throws ParameterError for k outside [0, L).
[[nodiscard]] int prng_bit(std::int64_t i, std::uint64_t k, const LegendrePrime& prime);

/// Basis index j = Σ_r a_i(k^(r))·2^(m-r); register 1 is the most significant bit.
[[nodiscard]] AngleIndex basis_angle_index(std::int64_t i, const RegisterKeySet& keys,
                                           const LegendrePrime& prime);

/// Exact number of j in [0, L) with ā_{j+offset_t} = bit_t for every t.
/// Brute force; refuses L above kPatternCountLimit and duplicate offsets.
[[nodiscard]] std::uint64_t pattern_count(std::span<const std::int64_t> offsets,
                                          std::span<const int> bits, const LegendrePrime& prime);

inline constexpr std::uint64_t kPatternCountLimit = 10'000'000;

/// W(s) = (√L[2^(s-1)(s-3)+2] + 2^(s-1)(s+1) - 1) / 2^s, the deviation bound on
/// order-s pattern counts around L/2^s. Valid for s >= 3.
[[nodiscard]] double pattern_deviation_bound(int s, double L);

}  // namespace prbqkd
