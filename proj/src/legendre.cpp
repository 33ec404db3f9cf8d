#include "prbqkd/legendre.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "prbqkd/errors.hpp"

namespace prbqkd {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
  std::uint64_t x = mod_pow(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

int ceil_log2(std::uint64_t v) {
  int bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < v) ++bits;
  return bits;
}

}  // namespace

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is exact below 3.3e24, which covers all of uint64.
  return std::none_of(kWitnesses.begin(), kWitnesses.end(),
                      [&](std::uint64_t a) { return miller_rabin_witness(n, a, d, r); });
}

LegendrePrime::LegendrePrime(std::uint64_t L) : value_(L), key_bits_(ceil_log2(L)) {
  if (!is_prime_u64(L)) throw ParameterError("L = " + std::to_string(L) + " is not prime");
  if (L % 4 != 3) throw ParameterError("L = " + std::to_string(L) + " is not congruent to 3 mod 4");
}

std::uint64_t LegendrePrime::reduce(std::int64_t i) const noexcept {
  const auto L = static_cast<std::int64_t>(value_);
  std::int64_t r = i % L;
  if (r < 0) r += L;
  return static_cast<std::uint64_t>(r);
}

int LegendrePrime::sequence_bit(std::uint64_t residue) const noexcept {
  if (table_) return (*table_)[residue];
  if (residue == 0) return 0;
  return mod_pow(residue, (value_ - 1) / 2, value_) == 1 ? 1 : 0;
}

void LegendrePrime::build_table() {
  if (table_ || value_ > kTableLimit) return;
  auto table = std::make_shared<std::vector<std::uint8_t>>(value_, 0);
  // Squares of 1..(L-1)/2 enumerate every nonzero residue exactly once.
  for (std::uint64_t y = 1; y <= (value_ - 1) / 2; ++y) (*table)[y * y % value_] = 1;
  table_ = std::move(table);
}

double to_radians(AngleIndex a, std::uint32_t basis_count) noexcept {
  return std::numbers::pi * static_cast<double>(a.value) / (2.0 * static_cast<double>(basis_count));
}

RegisterKeySet::RegisterKeySet(std::vector<std::uint64_t> keys, const LegendrePrime& prime)
    : keys_(std::move(keys)), subkey_bits_(prime.key_bits()) {
  if (keys_.empty()) throw ParameterError("register key set needs at least one register");
  if (keys_.size() > 20) throw ParameterError("at most 20 registers are supported");
  for (auto k : keys_) {
    if (k >= prime.value())
      throw ParameterError("register key " + std::to_string(k) + " outside [0, L)");
  }
}

std::uint64_t RegisterKeySet::key(int register_index) const {
  if (register_index < 1 || register_index > register_count())
    throw ParameterError("register index out of range");
  return keys_[static_cast<std::size_t>(register_index - 1)];
}

bool is_quadratic_residue(std::int64_t x, const LegendrePrime& prime) {
  const std::uint64_t r = prime.reduce(x);
  if (r == 0) return false;
  return mod_pow(r, (prime.value() - 1) / 2, prime.value()) == 1;
}

int legendre_bit(std::int64_t i, const LegendrePrime& prime) {
  return prime.sequence_bit(prime.reduce(i));
}

int prng_bit(std::int64_t i, std::uint64_t k, const LegendrePrime& prime) {
  if (k >= prime.value()) throw ParameterError("key " + std::to_string(k) + " outside [0, L)");
  const std::uint64_t base = prime.reduce(i);
  std::uint64_t pos = base + k;
  if (pos >= prime.value()) pos -= prime.value();
  return prime.sequence_bit(pos);
}

AngleIndex basis_angle_index(std::int64_t i, const RegisterKeySet& keys, const LegendrePrime& prime) {
  std::uint32_t j = 0;
  for (auto k : keys.keys()) j = (j << 1) | static_cast<std::uint32_t>(prng_bit(i, k, prime));
  return AngleIndex{j};
}

std::uint64_t pattern_count(std::span<const std::int64_t> offsets, std::span<const int> bits,
                            const LegendrePrime& prime) {
  if (offsets.empty() || offsets.size() != bits.size())
    throw ParameterError("pattern needs matching, nonempty offset and bit lists");
  if (prime.value() > kPatternCountLimit)
    throw EnumerationLimitError("pattern_count is brute force; L must not exceed 1e7");
  std::vector<std::uint64_t> residues;
  residues.reserve(offsets.size());
  for (auto o : offsets) residues.push_back(prime.reduce(o));
  auto sorted = residues;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParameterError("pattern offsets must be pairwise distinct modulo L");
  for (int b : bits) {
    if (b != 0 && b != 1) throw ParameterError("pattern bits must be 0 or 1");
  }

  const std::uint64_t L = prime.value();
  std::uint64_t count = 0;
  for (std::uint64_t j = 0; j < L; ++j) {
    bool match = true;
    for (std::size_t t = 0; t < residues.size() && match; ++t) {
      std::uint64_t pos = j + residues[t];
      if (pos >= L) pos -= L;
      match = prime.sequence_bit(pos) == bits[t];
    }
    count += match ? 1 : 0;
  }
  return count;
}

double pattern_deviation_bound(int s, double L) {
  if (s < 3) throw ParameterError("pattern_deviation_bound requires s >= 3 (s = 2 counts are exact)");
  if (s > 60) throw ParameterError("pattern order too large");
  const double half = std::ldexp(1.0, s - 1);
  return (std::sqrt(L) * (half * (s - 3) + 2.0) + half * (s + 1) - 1.0) / std::ldexp(1.0, s);
}

}  // namespace prbqkd
