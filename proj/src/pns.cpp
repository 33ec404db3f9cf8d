#include "prbqkd/pns.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "prbqkd/errors.hpp"
#include "prbqkd/parallel.hpp"

namespace prbqkd {

namespace {

// cos⁴Δ + sin⁴Δ = 1 - ½ sin²(2Δ); with M = 2 the only offsets are 0 and π/4.
double pair_factor(int bit_a, int bit_b) { return bit_a == bit_b ? 1.0 : 0.5; }

void check_two_basis(int register_count) {
  if (register_count != 1) throw ParameterError("PNS analysis is restricted to two bases (m = 1)");
}

}  // namespace

double overlap_sq_sum(std::uint64_t k, std::uint64_t k_prime, std::span<const std::uint64_t> positions,
                      const LegendrePrime& prime, int register_count) {
  check_two_basis(register_count);
  double product = 1.0;
  for (auto i : positions) {
    const auto pos = static_cast<std::int64_t>(i);
    product *= pair_factor(prng_bit(pos, k, prime), prng_bit(pos, k_prime, prime));
  }
  return product;
}

double succ_prob_lower_bound(double l, double n) {
  if (!(l >= 0.0)) throw ParameterError("seed length l must be nonnegative");
  if (!(n >= 0.0)) throw ParameterError("pulse count n must be nonnegative");
  // (2^l - 1) 2^{-n/2} = 2^{l - n/2} (1 - 2^{-l}), finite for any l.
  const double tail = std::exp2(l - n / 2.0) * -std::expm1(-l * std::log(2.0));
  return 1.0 / (1.0 + tail);
}

double discrimination_bound_exact(const LegendrePrime& prime, std::span<const std::uint64_t> positions,
                                  std::optional<std::span<const std::uint64_t>> keys) {
  std::vector<std::uint64_t> key_set;
  if (keys) {
    key_set.assign(keys->begin(), keys->end());
    for (auto k : key_set) {
      if (k >= prime.value()) throw ParameterError("key outside [0, L)");
    }
  } else {
    key_set.resize(prime.value());
    for (std::uint64_t k = 0; k < prime.value(); ++k) key_set[k] = k;
  }
  if (key_set.empty()) throw ParameterError("key set is empty");
  const double K = static_cast<double>(key_set.size());
  if (K * K * static_cast<double>(positions.size() + 1) > kDiscriminationWorkLimit)
    throw EnumerationLimitError("discrimination enumeration exceeds the work limit");

  // Each key reduces to its bit string on the positions; overlaps halve per disagreement.
  std::vector<std::vector<std::uint8_t>> bits(key_set.size());
  for (std::size_t a = 0; a < key_set.size(); ++a) {
    bits[a].reserve(positions.size());
    for (auto i : positions)
      bits[a].push_back(static_cast<std::uint8_t>(prng_bit(static_cast<std::int64_t>(i), key_set[a], prime)));
  }

  // Row sums are dyadic with at most n fractional bits, hence exact; rows with
  // equal sums are grouped so that symmetric cases (n = 0) come out exactly.
  auto row_sums = parallel_map(key_set.size(), [&](std::size_t a) {
    double sum = 0.0;
    for (std::size_t b = 0; b < key_set.size(); ++b) {
      int differ = 0;
      for (std::size_t j = 0; j < positions.size(); ++j) differ += bits[a][j] != bits[b][j] ? 1 : 0;
      sum += std::ldexp(1.0, -differ);
    }
    return sum;
  });
  std::sort(row_sums.begin(), row_sums.end());
  double total = 0.0;
  for (std::size_t i = 0; i < row_sums.size();) {
    std::size_t j = i;
    while (j < row_sums.size() && row_sums[j] == row_sums[i]) ++j;
    total += static_cast<double>(j - i) / row_sums[i];
    i = j;
  }
  return total / K;
}

}  // namespace prbqkd
