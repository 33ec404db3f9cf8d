#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "prbqkd/legendre.hpp"

namespace prbqkd {

/// Π_j {cos⁴Δ_j + sin⁴Δ_j}, Δ_j = φ_j(k) - φ_j(k') at the given positions.
/// Only the two-basis case (register_count = 1) is supported.
[[nodiscard]] double overlap_sq_sum(std::uint64_t k, std::uint64_t k_prime, std::span<const std::uint64_t> positions,
                                    const LegendrePrime& prime, int register_count = 1);

/// 1 / (1 + (2^l - 1) 2^{-n/2}).
[[nodiscard]] double succ_prob_lower_bound(double l, double n);

inline constexpr double kDiscriminationWorkLimit = 1e9;

/// (1/|K|) Σ_k 1 / Σ_{k'} overlap_sq_sum(k, k'), over K = Z_L or the given
/// subset. The Σ over Alice's bits collapses into the overlap product, so
/// the value does not depend on x.
[[nodiscard]] double discrimination_bound_exact(const LegendrePrime& prime, std::span<const std::uint64_t> positions,
                                                std::optional<std::span<const std::uint64_t>> keys = std::nullopt);

}  // namespace prbqkd
