#include "prbqkd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "prbqkd/errors.hpp"
#include "prbqkd/simplex.hpp"

namespace prbqkd {

namespace {

constexpr int kExactCdfLimit = 64;
constexpr int kMaxBinomialOrder = 1'000'000;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double exact_cdf(int s, std::int64_t t) {
  using u128 = unsigned __int128;
  u128 c = 1;
  u128 total = 0;
  for (int i = 0; i <= t; ++i) {
    total += c;
    c = c * static_cast<u128>(s - i) / static_cast<u128>(i + 1);
  }
  return std::ldexp(static_cast<double>(total), -s);
}

double log_pmf_half(int s, int i) {
  return detail::log_binomial(s, i) - s * std::numbers::ln2;
}

void check_order(int s) {
  if (s < 0) throw ParameterError("binomial order must be nonnegative");
  if (s > kMaxBinomialOrder) throw ParameterError("binomial order too large");
}

double closed_form(double Lval, double gamma, const BinomialCdfTable& PS, const BinomialCdfTable& PSm1) {
  const int S = PS.order();
  const int r = find_r(PS, gamma);
  return Lval * (PSm1(r) + static_cast<double>(S - r - 1) / S * (gamma - 2.0 * PS(r)));
}

}  // namespace

namespace detail {

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_cdf_lgamma(int s, std::int64_t t) {
  check_order(s);
  if (t < 0) return 0.0;
  if (t >= s) return 1.0;
  const int ti = static_cast<int>(t);
  CompensatedSum sum;
  // Sum the smaller tail; the complement keeps the large side accurate.
  if (2 * ti < s) {
    for (int i = 0; i <= ti; ++i) sum.add(std::exp(log_pmf_half(s, i)));
    return sum.value();
  }
  for (int i = ti + 1; i <= s; ++i) sum.add(std::exp(log_pmf_half(s, i)));
  return 1.0 - sum.value();
}

}  // namespace detail

double binomial_cdf(int s, std::int64_t t) {
  check_order(s);
  if (t < 0) return 0.0;
  if (t >= s) return 1.0;
  if (s <= kExactCdfLimit) return exact_cdf(s, t);
  return detail::binomial_cdf_lgamma(s, t);
}

BinomialCdfTable::BinomialCdfTable(int s) : s_(s), cdf_(static_cast<std::size_t>(s) + 1, 1.0) {
  check_order(s);
  if (s <= kExactCdfLimit) {
    for (int t = 0; t <= s; ++t) cdf_[static_cast<std::size_t>(t)] = exact_cdf(s, t);
    return;
  }
  CompensatedSum lower;
  for (int t = 0; 2 * t < s; ++t) {
    lower.add(std::exp(log_pmf_half(s, t)));
    cdf_[static_cast<std::size_t>(t)] = lower.value();
  }
  CompensatedSum upper;  // Pr[X > t]
  for (int t = s - 1; 2 * t >= s; --t) {
    upper.add(std::exp(log_pmf_half(s, t + 1)));
    cdf_[static_cast<std::size_t>(t)] = 1.0 - upper.value();
  }
}

double BinomialCdfTable::operator()(std::int64_t t) const noexcept {
  if (t < 0) return 0.0;
  if (t >= s_) return 1.0;
  return cdf_[static_cast<std::size_t>(t)];
}

int find_r(const BinomialCdfTable& table, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  int r = -1;
  while (r + 1 < table.order() && table(r + 1) <= gamma / 2.0) ++r;
  return r;
}

int find_r(int s, double gamma) {
  if (s < 1) throw ParameterError("pattern order s must be >= 1");
  return find_r(BinomialCdfTable(s), gamma);
}

double bound_theorem1(double L, double gamma, int s) {
  if (!(L > 0.0)) throw ParameterError("L must be positive");
  if (s < 1) throw ParameterError("key subset size s must be >= 1");
  return closed_form(L, gamma, BinomialCdfTable(s), BinomialCdfTable(s - 1));
}

GuessBoundProblem GuessBoundProblem::with_deviation(double L, double gamma, int s_pattern, int S_keys,
                                                    double W) {
  if (!(L > 0.0)) throw ParameterError("L must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  if (s_pattern < 2) throw ParameterError("pattern order s must be >= 2");
  if (S_keys < 1) throw ParameterError("key subset size S must be >= 1");
  if (!(W >= 0.0)) throw ParameterError("deviation W must be nonnegative");
  GuessBoundProblem p;
  p.L = L;
  p.gamma = gamma;
  p.s_pattern = s_pattern;
  p.S_keys = S_keys;
  p.W = W;
  p.Lprime = L + std::ldexp(W, s_pattern);
  p.gamma_prime = gamma * L / p.Lprime;
  return p;
}

GuessBoundProblem GuessBoundProblem::from_formula(double L, double gamma, int s_pattern, int S_keys) {
  if (s_pattern < 2) throw ParameterError("pattern order s must be >= 2");
  const double W = s_pattern == 2 ? 0.25 : pattern_deviation_bound(s_pattern, L);
  if (std::ldexp(W, s_pattern) >= L)
    throw DeviationDominatesPeriodError("2^s W(s) >= L for s = " + std::to_string(s_pattern) +
                                        "; the bound is vacuous");
  return with_deviation(L, gamma, s_pattern, S_keys, W);
}

double bound_corollary1(const GuessBoundProblem& p) {
  return closed_form(p.Lprime, p.gamma_prime, BinomialCdfTable(p.S_keys), BinomialCdfTable(p.S_keys - 1));
}

double bound_corollary1(double L, double gamma, int s_pattern, int S_keys) {
  return bound_corollary1(GuessBoundProblem::from_formula(L, gamma, s_pattern, S_keys));
}

Corollary2Program::Corollary2Program(int s_pattern, int S_keys) : s_(s_pattern), S_(S_keys) {
  if (s_ < 2) throw ParameterError("pattern order s must be >= 2");
  if (S_ < s_) throw ParameterError("key subset size S must be >= pattern order s");
  if (S_ > kMaxBinomialOrder) throw ParameterError("key subset size too large");
  const int half = S_ / 2;
  objective_.resize(static_cast<std::size_t>(half) + 1);
  for (int t = 0; t <= half; ++t) {
    // Majority guessing on class {t, S-t} is right for (S-t)/S of its mass.
    objective_[static_cast<std::size_t>(t)] = 2 * t == S_ ? 0.5 : static_cast<double>(S_ - t) / S_;
  }
  for (int h = 0; 2 * h <= s_; ++h) {
    std::vector<double> row(static_cast<std::size_t>(half) + 1, 0.0);
    for (int t = 0; t <= half; ++t) {
      const bool middle = 2 * t == S_;
      double c = 0.0;
      for (int tau : {t, S_ - t}) {
        const int k = tau - h;
        if (k >= 0 && k <= S_ - s_)
          c += std::exp(detail::log_binomial(S_ - s_, k) - detail::log_binomial(S_, tau));
        if (middle) break;
      }
      row[static_cast<std::size_t>(t)] = std::ldexp(c, s_) / (middle ? 1.0 : 2.0);
    }
    rows_.push_back(std::move(row));
  }
}

LpSolution Corollary2Program::solve(double gamma_prime) const {
  if (!(gamma_prime > 0.0 && gamma_prime <= 1.0)) throw ParameterError("gamma' must lie in (0, 1]");
  LinearProgram lp;
  lp.c = objective_;
  lp.A_ub = rows_;
  lp.b_ub.assign(rows_.size(), 1.0);
  lp.A_eq = {std::vector<double>(objective_.size(), 1.0)};
  lp.b_eq = {gamma_prime};
  const SimplexResult res = solve_simplex(lp);

  LpSolution out;
  out.nu_correct = res.objective;
  out.class_mass = res.x;
  out.dual = res.y_ub;
  out.dual.insert(out.dual.end(), res.y_eq.begin(), res.y_eq.end());
  out.gap = std::abs(res.dual_objective - res.objective);
  out.iterations = res.iterations;
  if (out.gap > 1e-9 || res.dual_infeasibility > 1e-9)
    throw NumericError("pattern LP terminated with primal-dual gap " + std::to_string(out.gap));
  return out;
}

LpBound bound_corollary2_lp(const GuessBoundProblem& problem) {
  if (problem.S_keys < problem.s_pattern)
    throw ParameterError("the pattern LP needs key subset size S >= pattern order s");
  const Corollary2Program program(problem.s_pattern, problem.S_keys);
  LpBound out;
  out.solution = program.solve(problem.gamma_prime);
  out.value = out.solution.nu_correct * problem.Lprime;
  return out;
}

LpBound bound_corollary2_lp(double L, double gamma, int s_pattern, int S_keys) {
  return bound_corollary2_lp(GuessBoundProblem::from_formula(L, gamma, s_pattern, S_keys));
}

std::vector<std::uint64_t> bruteforce_minmax(const LegendrePrime& prime, std::span<const std::uint64_t> keys) {
  const std::uint64_t L = prime.value();
  if (L > kMinmaxPrimeLimit) throw EnumerationLimitError("bruteforce_minmax needs L <= 31");
  if (keys.empty()) throw ParameterError("candidate key set is empty");
  std::vector<std::uint64_t> sorted(keys.begin(), keys.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParameterError("candidate keys must be distinct");
  for (auto k : keys) {
    if (k >= L) throw ParameterError("candidate key outside [0, L)");
  }

  const std::size_t s = keys.size();
  const std::uint64_t base = L + 1;
  const double states = std::pow(static_cast<double>(base), static_cast<double>(s + 1));
  if (states > kMinmaxStateLimit) throw EnumerationLimitError("bruteforce_minmax state space exceeds 1e8");

  // code = chosen·base^s + Σ_j correct_j·base^j
  std::vector<std::uint64_t> power(s + 1, 1);
  for (std::size_t j = 1; j <= s; ++j) power[j] = power[j - 1] * base;
  const auto total = static_cast<std::size_t>(power[s] * base);

  std::vector<bool> reach(total, false);
  reach[0] = true;
  std::uint64_t top = 0;  // largest reachable code so far
  for (std::uint64_t i = 0; i < L; ++i) {
    std::uint64_t inc[2] = {power[s], power[s]};
    for (std::size_t j = 0; j < s; ++j) inc[prng_bit(static_cast<std::int64_t>(i), keys[j], prime)] += power[j];
    // Taking position i always raises the code, so a descending sweep sees
    // each old state exactly once, like a 0/1 knapsack.
    std::uint64_t new_top = top;
    for (std::uint64_t code = top + 1; code-- > 0;) {
      if (!reach[static_cast<std::size_t>(code)]) continue;
      for (auto d : inc) {
        reach[static_cast<std::size_t>(code + d)] = true;
        new_top = std::max(new_top, code + d);
      }
    }
    top = new_top;
  }

  std::vector<std::uint64_t> best(L + 1, 0);
  for (std::uint64_t code = 0; code <= top; ++code) {
    if (!reach[static_cast<std::size_t>(code)]) continue;
    const std::uint64_t chosen = code / power[s];
    std::uint64_t worst = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t j = 0; j < s; ++j) worst = std::min(worst, code / power[j] % base);
    best[chosen] = std::max(best[chosen], worst);
  }
  return best;
}

std::uint64_t bruteforce_minmax(const LegendrePrime& prime, std::span<const std::uint64_t> keys,
                                std::uint64_t n) {
  if (n > prime.value()) throw ParameterError("n must not exceed L");
  return bruteforce_minmax(prime, keys)[n];
}

double exact_pattern_excess(const LegendrePrime& prime, std::span<const std::uint64_t> keys) {
  const std::size_t s = keys.size();
  if (s == 0 || s > 20) throw ParameterError("pattern excess needs 1..20 keys");
  std::vector<std::int64_t> offsets(keys.begin(), keys.end());
  std::vector<int> bits(s);
  double excess = -std::numeric_limits<double>::infinity();
  const double ideal = std::ldexp(static_cast<double>(prime.value()), -static_cast<int>(s));
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << s); ++pattern) {
    for (std::size_t j = 0; j < s; ++j) bits[j] = static_cast<int>((pattern >> j) & 1u);
    excess = std::max(excess, static_cast<double>(pattern_count(offsets, bits, prime)) - ideal);
  }
  return excess;
}

}  // namespace prbqkd
