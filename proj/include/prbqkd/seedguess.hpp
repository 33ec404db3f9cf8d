#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prbqkd/legendre.hpp"
#include "prbqkd/rng.hpp"

namespace prbqkd {

/// What Eve knows about one intercepted position once x is announced:
/// her basis β and outcome z, Alice's bit x and the error flag c = x ⊕ y.
/// β lives on the extended grid of 2M angles πj/(2M).
struct EveObservation {
  int x = 0;
  int z = 0;
  int c = 0;
  AngleIndex beta;
};

struct PositionedObservation {
  std::uint64_t position = 0;
  EveObservation e;
};

/// Angle index on the extended grid with m+1 registers: register 0 adds π/2
/// (weight M), registers 1..m follow with weights M/2, ..., 1.
/// `keys` holds m+1 seeds, register 0 first.
[[nodiscard]] AngleIndex extended_angle_index(std::int64_t i, std::span<const std::uint64_t> keys,
                                              const LegendrePrime& prime);

/// p(e | φ) = (1/8){1 - c + cos[2(β-φ) + π(x-z) - πc/2]}², both angles on
/// the extended grid of basis count M.
[[nodiscard]] double observation_likelihood(const EveObservation& e, AngleIndex phi, std::uint32_t basis_count);

struct ObservationMarginals {
  double p_e_no_error = 3.0 / 16.0;  // p(x, z, c = 0)
  double p_e_error = 1.0 / 16.0;     // p(x, z, c = 1)
  double p_c0 = 3.0 / 4.0;
  double p_c1 = 1.0 / 4.0;
};

[[nodiscard]] ObservationMarginals observation_marginals();

inline constexpr double kSeedEnumerationLimit = 1e7;

struct SeedEstimate {
  std::vector<std::uint64_t> keys;  // m+1 seeds, register 0 first
  double posterior_max = 0.0;
};

/// Exact maximum-likelihood seed over all L^{m+1} extended key sets under a
/// uniform prior. Ties go to the first key set in lexicographic order.
[[nodiscard]] SeedEstimate ml_seed_estimate(std::span<const PositionedObservation> observations,
                                            const LegendrePrime& prime, int register_count);

/// Simulates Eve's intercept-resend observations at the given positions:
/// uniform x and β, honest Bob measuring Eve's resent state.
[[nodiscard]] std::vector<PositionedObservation> simulate_observations(std::span<const std::uint64_t> keys,
                                                                       const LegendrePrime& prime,
                                                                       std::span<const std::uint64_t> positions,
                                                                       RandomStream& rng);

/// min(1, 2^{-l} (8/3)^{n0} 2^{n1}).
[[nodiscard]] double guess_probability_bound(double l, std::uint64_t n0, std::uint64_t n1);

/// l / (5/2 - (3/4) log2 3), roughly 0.76 l.
[[nodiscard]] double interceptions_needed(double l);

}  // namespace prbqkd
