#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace prbqkd::test {

/// Trial division, independent of the library's Miller-Rabin.
inline bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> primes_3_mod_4(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 3; n < limit; n += 4) {
    if (trial_division_prime(n)) out.push_back(n);
  }
  return out;
}

/// Legendre sequence by squaring, independent of Euler's criterion.
inline std::vector<int> legendre_by_squares(std::uint64_t L) {
  std::vector<int> seq(L, 0);
  for (std::uint64_t y = 1; y < L; ++y) seq[y * y % L] = 1;
  return seq;
}

/// |mean - expected| within k standard errors of a Bernoulli(p) mean over n draws.
inline bool within_sigma(double mean, double expected, double p, double n, double k = 3.0) {
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  return std::abs(mean - expected) <= k * sigma + 1e-15;
}

}  // namespace prbqkd::test
