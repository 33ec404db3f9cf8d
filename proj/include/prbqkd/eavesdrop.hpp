#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "prbqkd/legendre.hpp"
#include "prbqkd/rng.hpp"

namespace prbqkd {

/// Eve measures each intercepted pulse in a uniformly random basis.
struct UniformGuess {
  friend bool operator==(const UniformGuess&, const UniformGuess&) = default;
};

/// Eve holds one candidate key subset per register and attacks where the
/// first register's candidates agree most, guessing majority bits.
struct KeySubsetMajority {
  std::vector<std::vector<std::uint64_t>> register_candidates;
  friend bool operator==(const KeySubsetMajority&, const KeySubsetMajority&) = default;
};

struct EveStrategy {
  double gamma = 1.0;
  std::variant<UniformGuess, KeySubsetMajority> mode;

  /// Throws ParameterError on gamma outside (0, 1], empty candidate sets, or
  /// a register count that does not match m.
  void validate(int register_count, const LegendrePrime& prime, std::uint64_t pulses) const;

  friend bool operator==(const EveStrategy&, const EveStrategy&) = default;
};

/// Number of intercepted positions ⌈γN⌉ (at least one).
[[nodiscard]] std::uint64_t intercept_count(double gamma, std::uint64_t pulses);

struct MajoritySelection {
  std::vector<std::uint64_t> positions;  // ascending
  std::vector<int> guesses;              // majority bit at each position
};

/// Ranks positions by |HW - s/2| over the candidates' bits, takes the top
/// ⌈γN⌉ (ties by ascending index) and guesses the majority bit (HW <= s/2 → 0).
[[nodiscard]] MajoritySelection select_positions_majority(std::span<const std::uint64_t> candidates,
                                                          double gamma, const LegendrePrime& prime,
                                                          std::uint64_t pulses);

/// Eve's fixed attack plan: which positions she measures and in which basis.
struct EvePlan {
  std::uint32_t basis_count = 2;
  std::vector<std::uint64_t> positions;  // ascending
  std::vector<AngleIndex> betas;         // basis index in [0, M) per position

  [[nodiscard]] std::size_t size() const noexcept { return positions.size(); }
};

[[nodiscard]] EvePlan build_eve_bases(const EveStrategy& strategy, int register_count,
                                      const LegendrePrime& prime, std::uint64_t pulses,
                                      RandomStream& rng);

/// Intercepted positions where Eve's basis bit for `register_index` (1-based)
/// equals a_i(k^(register)).
[[nodiscard]] std::uint64_t count_correct_guesses(const EvePlan& plan, const RegisterKeySet& actual,
                                                  const LegendrePrime& prime, int register_index);

inline constexpr std::uint64_t kPosteriorKeyLimit = 1'000'000;

/// Exact posterior over all L^m keys given only Eve's outcomes z, with
/// Alice's bit marginalized. Keys are enumerated with register 1 varying
/// slowest. Throws EnumerationLimitError above kPosteriorKeyLimit keys.
[[nodiscard]] std::vector<double> key_posterior_given_z(std::span<const int> outcomes,
                                                        std::span<const std::uint64_t> positions,
                                                        std::span<const AngleIndex> betas,
                                                        const LegendrePrime& prime, int register_count);

/// JSON form used by CLI experiment configs:
///   {"gamma": 0.5, "mode": "uniform_guess"}
///   {"gamma": 0.5, "mode": "key_subset_majority", "candidates": [[0, 1], [4, 9]]}
[[nodiscard]] std::string strategy_to_json(const EveStrategy& strategy);
[[nodiscard]] EveStrategy strategy_from_json(const std::string& text);

}  // namespace prbqkd
