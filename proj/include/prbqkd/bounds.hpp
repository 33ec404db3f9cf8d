#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prbqkd/legendre.hpp"

namespace prbqkd {

/// Pr[Binomial(s, 1/2) <= t]; 0 for t < 0 and 1 for t >= s. Exact integer
/// summation for s <= 64, log-gamma terms with compensated summation above.
[[nodiscard]] double binomial_cdf(int s, std::int64_t t);

namespace detail {
[[nodiscard]] double binomial_cdf_lgamma(int s, std::int64_t t);
[[nodiscard]] double log_binomial(double n, double k);
}  // namespace detail

/// All values P_s(0..s) at once. Each entry is accumulated from the nearer
/// tail so both ends keep full relative precision.
class BinomialCdfTable {
 public:
  explicit BinomialCdfTable(int s);

  [[nodiscard]] int order() const noexcept { return s_; }
  [[nodiscard]] double operator()(std::int64_t t) const noexcept;

 private:
  int s_;
  std::vector<double> cdf_;
};

/// Largest r >= -1 with P_s(r) <= γ/2 (P_s(-1) = 0).
[[nodiscard]] int find_r(int s, double gamma);
[[nodiscard]] int find_r(const BinomialCdfTable& table, double gamma);

/// Ideal-pattern bound on the correctly guessed positions:
/// L·{P_{s-1}(r) + ((s-r-1)/s)(γ - 2P_s(r))}.
[[nodiscard]] double bound_theorem1(double L, double gamma, int s);

struct GuessBoundProblem {
  double L = 0.0;
  double gamma = 1.0;
  int s_pattern = 2;
  int S_keys = 2;
  double W = 0.0;
  double Lprime = 0.0;       // L(1 + 2^s W / L)
  double gamma_prime = 1.0;  // γ L / L'

  /// W from pattern_deviation_bound (W(2) = 1/4, the exact s = 2 excess).
  /// Throws DeviationDominatesPeriodError when 2^s W >= L.
  [[nodiscard]] static GuessBoundProblem from_formula(double L, double gamma, int s_pattern, int S_keys);
  /// Caller-supplied W >= 0, e.g. the exact excess of a specific key set.
  [[nodiscard]] static GuessBoundProblem with_deviation(double L, double gamma, int s_pattern,
                                                        int S_keys, double W);
};

/// L'·{P_{S-1}(r) + ((S-r-1)/S)(γ' - 2P_S(r))}, r = find_r(S, γ').
[[nodiscard]] double bound_corollary1(const GuessBoundProblem& problem);
[[nodiscard]] double bound_corollary1(double L, double gamma, int s_pattern, int S_keys);

struct LpSolution {
  double nu_correct = 0.0;          // optimum of the normalized program
  std::vector<double> class_mass;   // mass of weight classes {t, S-t}, t = 0..⌊S/2⌋
  std::vector<double> dual;         // one per pattern row, then the equality row
  double gap = 0.0;                 // |dual objective - primal objective|
  int iterations = 0;
};

/// The order-s marginal program over S keys. Variables are the masses of the
/// symmetric weight classes {t, S-t}; rows h = 0..⌊s/2⌋ cap the share of
/// positions on which the first s keys show a fixed weight-h pattern.
class Corollary2Program {
 public:
  Corollary2Program(int s_pattern, int S_keys);

  [[nodiscard]] int s_pattern() const noexcept { return s_; }
  [[nodiscard]] int S_keys() const noexcept { return S_; }
  [[nodiscard]] LpSolution solve(double gamma_prime) const;

 private:
  int s_;
  int S_;
  std::vector<double> objective_;
  std::vector<std::vector<double>> rows_;
};

struct LpBound {
  double value = 0.0;  // ν*·L'
  LpSolution solution;
};

[[nodiscard]] LpBound bound_corollary2_lp(const GuessBoundProblem& problem);
[[nodiscard]] LpBound bound_corollary2_lp(double L, double gamma, int s_pattern, int S_keys);

inline constexpr std::uint64_t kMinmaxPrimeLimit = 31;
inline constexpr double kMinmaxStateLimit = 1e8;

/// Exact max over n-position subsets and guess bits of min over keys of the
/// correct-guess count, on the actual sequences, for every n = 0..L. Dynamic
/// program over (chosen count, per-key correct counts).
[[nodiscard]] std::vector<std::uint64_t> bruteforce_minmax(const LegendrePrime& prime,
                                                           std::span<const std::uint64_t> keys);
[[nodiscard]] std::uint64_t bruteforce_minmax(const LegendrePrime& prime,
                                              std::span<const std::uint64_t> keys, std::uint64_t n);

/// max over bit patterns of (d - L/2^s) for the offsets `keys`, by enumeration.
[[nodiscard]] double exact_pattern_excess(const LegendrePrime& prime, std::span<const std::uint64_t> keys);

}  // namespace prbqkd
