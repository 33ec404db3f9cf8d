#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prbqkd/bounds.hpp"
#include "prbqkd/errors.hpp"
#include "prbqkd/legendre.hpp"
#include "prbqkd/rng.hpp"

using namespace prbqkd;

namespace {

/// Pr[Bin(s, 1/2) <= t] from a Pascal triangle of exact integer counts.
double pascal_cdf(int s, int t) {
  std::vector<std::uint64_t> row{1};
  for (int n = 1; n <= s; ++n) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(n) + 1, 1);
    for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  std::uint64_t total = 0;
  for (int k = 0; k <= std::min(t, s); ++k) total += row[k];
  return std::ldexp(static_cast<double>(total), -s);
}

double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

/// max c·x over A x <= b, E x = e, x >= 0 by enumerating basic solutions.
double vertex_max(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b, const std::vector<std::vector<double>>& E,
                  const std::vector<double>& e) {
  const std::size_t n = c.size();
  // Candidate tight rows: A rows, then x_j >= 0 as -x_j <= 0.
  std::vector<std::vector<double>> rows = A;
  std::vector<double> rhs = b;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> r(n, 0.0);
    r[j] = -1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  const std::size_t need = n - E.size();
  double best = -1e300;
  std::vector<int> pick(rows.size(), 0);
  std::fill(pick.end() - static_cast<std::ptrdiff_t>(need), pick.end(), 1);
  do {
    std::vector<std::vector<double>> M = E;
    std::vector<double> v = e;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (pick[i]) {
        M.push_back(rows[i]);
        v.push_back(rhs[i]);
      }
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (std::size_t col = 0; col < n && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
      if (std::abs(M[piv][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(M[piv], M[col]);
      std::swap(v[piv], v[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = M[r][col] / M[col][col];
        for (std::size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
        v[r] -= f * v[col];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = v[j] / M[j][j];
    bool feasible = std::all_of(x.begin(), x.end(), [](double xi) { return xi >= -1e-10; });
    for (std::size_t i = 0; i < A.size() && feasible; ++i)
      feasible = std::inner_product(A[i].begin(), A[i].end(), x.begin(), 0.0) <= b[i] + 1e-10;
    if (feasible) best = std::max(best, std::inner_product(c.begin(), c.end(), x.begin(), 0.0));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

/// The unreduced program over ν_0..ν_S in pattern-count units.
double full_program_optimum(int s, int S, double gamma) {
  std::vector<double> c;
  for (int t = 0; t <= S; ++t) c.push_back(2 * t <= S ? choose(S - 1, t) : choose(S - 1, t - 1));
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (int h = 0; h <= s; ++h) {
    std::vector<double> row(static_cast<std::size_t>(S) + 1, 0.0);
    for (int t = 0; t + h <= S; ++t) row[static_cast<std::size_t>(h + t)] = choose(S - s, t);
    A.push_back(row);
    b.push_back(std::ldexp(1.0, -s));
  }
  std::vector<double> eq;
  for (int t = 0; t <= S; ++t) eq.push_back(choose(S, t));
  return vertex_max(c, A, b, {eq}, {gamma});
}

/// Max over n of min-over-keys correct guesses by literal 3^L enumeration.
std::vector<std::uint64_t> literal_minmax(const LegendrePrime& L, const std::vector<std::uint64_t>& keys) {
  const auto n = static_cast<int>(L.value());
  std::vector<std::uint64_t> best(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> choice(static_cast<std::size_t>(n), 0);  // 0 skip, 1 guess 0, 2 guess 1
  while (true) {
    int chosen = 0;
    std::uint64_t worst = ~std::uint64_t{0};
    for (auto k : keys) {
      std::uint64_t correct = 0;
      for (int i = 0; i < n; ++i)
        if (choice[i] != 0) correct += (choice[i] - 1) == prng_bit(i, k, L) ? 1 : 0;
      worst = std::min(worst, correct);
    }
    for (int ch : choice) chosen += ch != 0 ? 1 : 0;
    best[chosen] = std::max(best[chosen], worst);
    int pos = 0;
    while (pos < n && choice[pos] == 2) choice[pos++] = 0;
    if (pos == n) break;
    ++choice[pos];
  }
  return best;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("binomial CDF examples") {
    CHECK(binomial_cdf(2, 0) == 0.25);
    CHECK(binomial_cdf(2, 1) == 0.75);
    CHECK(binomial_cdf(5, 2) == 0.5);
    CHECK(binomial_cdf(5, -1) == 0.0);
    CHECK(binomial_cdf(5, 5) == 1.0);
    CHECK(binomial_cdf(5, 99) == 1.0);
    CHECK(binomial_cdf(1000, 500) == doctest::Approx(0.5126125090891804).epsilon(1e-13));
  }

  TEST_CASE("binomial CDF matches the Pascal triangle for s <= 30") {
    for (int s = 0; s <= 30; ++s) {
      for (int t = -1; t <= s; ++t) REQUIRE(std::abs(binomial_cdf(s, t) - pascal_cdf(s, t)) < 1e-13);
    }
  }

  TEST_CASE("log-gamma path agrees with exact summation") {
    for (int s = 40; s <= 64; ++s) {
      for (int t = 0; t < s; ++t) {
        const double exact = binomial_cdf(s, t);
        REQUIRE(std::abs(detail::binomial_cdf_lgamma(s, t) - exact) <= 1e-12 * exact);
      }
    }
  }

  TEST_CASE("CDF table agrees with the function") {
    for (int s : {1, 7, 64, 65, 300, 1000}) {
      const BinomialCdfTable table(s);
      CHECK(table.order() == s);
      CHECK(table(-1) == 0.0);
      CHECK(table(s) == 1.0);
      for (int t = 0; t < s; ++t) {
        const double v = binomial_cdf(s, t);
        REQUIRE(std::abs(table(t) - v) <= 1e-12 * v);
      }
    }
  }

  TEST_CASE("find_r brackets γ/2") {
    CHECK(find_r(2, 1.0) == 0);
    CHECK(find_r(2, 0.5) == 0);
    CHECK(find_r(4, 0.1) == -1);
    for (int s : {3, 10, 101}) {
      for (double g : {0.01, 0.2, 0.5, 0.99, 1.0}) {
        const int r = find_r(s, g);
        CHECK(binomial_cdf(s, r) <= g / 2);
        if (r + 1 < s) CHECK(binomial_cdf(s, r + 1) > g / 2);
      }
    }
  }

  TEST_CASE("exact-pattern closed form") {
    CHECK(bound_theorem1(1019, 1.0, 2) == 0.75 * 1019);
    CHECK(bound_theorem1(1019, 0.5, 2) == 0.5 * 1019);
    const double L = 1e6;
    const double ratio = bound_theorem1(L, 0.5, 10000) / (0.5 * L);
    CHECK(ratio > 0.5);
    CHECK(ratio < 0.52);
    for (int s : {2, 5, 20}) {
      double previous = 0.0;
      for (int k = 1; k <= 20; ++k) {
        const double g = k / 20.0;
        const double v = bound_theorem1(L, g, s);
        CHECK(v >= previous);
        CHECK(v <= g * L + 1e-9);
        CHECK(v >= g * L / 2 - 1e-9);
        previous = v;
      }
    }
  }

  TEST_CASE("deviation-corrected closed form substitutes L prime and gamma prime") {
    const auto ideal = GuessBoundProblem::with_deviation(1019, 0.7, 3, 5, 0.0);
    CHECK(ideal.Lprime == 1019);
    CHECK(bound_corollary1(ideal) == doctest::Approx(bound_theorem1(1019, 0.7, 5)).epsilon(1e-15));

    const auto p = GuessBoundProblem::from_formula(1019, 1.0, 3, 2);
    const double W = pattern_deviation_bound(3, 1019);
    CHECK(p.W == W);
    CHECK(p.Lprime == doctest::Approx(1019 + 8 * W).epsilon(1e-15));
    CHECK(p.gamma_prime == doctest::Approx(1019 / p.Lprime).epsilon(1e-15));
    // γ' < 1 keeps r = 0, so the value is L'(1/2 + (1/2)(γ' - 1/2)).
    CHECK(bound_corollary1(p) == doctest::Approx(p.Lprime * (0.5 + 0.5 * (p.gamma_prime - 0.5))).epsilon(1e-14));
    CHECK(bound_corollary1(1019, 1.0, 3, 2) == bound_corollary1(p));

    CHECK(GuessBoundProblem::from_formula(1019, 1.0, 2, 2).W == 0.25);
    CHECK_THROWS_AS((void)GuessBoundProblem::from_formula(103, 0.5, 4, 4), DeviationDominatesPeriodError);
    CHECK_THROWS_AS((void)GuessBoundProblem::with_deviation(103, 0.5, 2, 2, -1.0), ParameterError);
    CHECK_THROWS_AS((void)GuessBoundProblem::with_deviation(103, 0.0, 2, 2, 0.0), ParameterError);
  }

  TEST_CASE("deviation-corrected closed form at the large-key parameters") {
    const double L = 9'999'999'967.0;
    for (int S : {12, 1000}) {
      double previous = 1.0;
      for (int k = 1; k <= 20; ++k) {
        const auto p = GuessBoundProblem::from_formula(L, 0.05 * k, 12, S);
        const double delta = bound_corollary1(p) / p.Lprime / p.gamma_prime - 0.5;
        CHECK(delta > 0.0);
        CHECK(delta < previous);
        previous = delta;
      }
    }
  }

  TEST_CASE("the program collapses to the exact-pattern closed form when s = S") {
    for (int S : {2, 3, 5, 8, 12}) {
      for (double g : {0.1, 0.3, 0.5, 0.7, 1.0}) {
        const double lp = bound_corollary2_lp(GuessBoundProblem::with_deviation(1e6, g, S, S, 0.0)).value;
        REQUIRE(lp == doctest::Approx(bound_theorem1(1e6, g, S)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("reduced program matches vertex enumeration of the full program") {
    const Corollary2Program reduced(2, 4);
    const auto at_one = reduced.solve(1.0);
    CHECK(at_one.nu_correct == doctest::Approx(0.75).epsilon(1e-12));
    for (double g : {0.1, 0.25, 0.5, 0.8, 1.0}) {
      CHECK(reduced.solve(g).nu_correct == doctest::Approx(full_program_optimum(2, 4, g)).epsilon(1e-10));
    }
    for (double g : {0.2, 0.6, 1.0}) {
      CHECK(Corollary2Program(2, 5).solve(g).nu_correct ==
            doctest::Approx(full_program_optimum(2, 5, g)).epsilon(1e-10));
      CHECK(Corollary2Program(3, 6).solve(g).nu_correct ==
            doctest::Approx(full_program_optimum(3, 6, g)).epsilon(1e-10));
    }
  }

  TEST_CASE("program optimum lies between the order-S and order-s closed forms") {
    for (int s : {2, 4, 6}) {
      for (int S : {6, 10, 30}) {
        for (double g : {0.05, 0.2, 0.4, 0.6, 0.8, 1.0}) {
          const auto problem = GuessBoundProblem::with_deviation(1e8, g, s, S, 3.0);
          const auto order_s = GuessBoundProblem::with_deviation(1e8, g, s, s, 3.0);
          const auto lp = bound_corollary2_lp(problem);
          // Order-S class capacities imply the order-s rows, so the program sits between the two.
          CHECK(lp.value >= bound_corollary1(problem) * (1 - 1e-12));
          CHECK(lp.value <= bound_corollary1(order_s) * (1 + 1e-12));
          CHECK(lp.value >= problem.gamma_prime * problem.Lprime / 2 * (1 - 1e-12));
          CHECK(lp.solution.gap < 1e-9);
        }
      }
    }
    CHECK_THROWS_AS((void)bound_corollary2_lp(1019, 0.5, 3, 2), ParameterError);
  }

  TEST_CASE("program is strictly tighter at the large-key parameters") {
    const double L = 9'999'999'967.0;
    for (int k = 1; k <= 20; ++k) {
      const auto problem = GuessBoundProblem::from_formula(L, 0.05 * k, 12, 1000);
      const auto lp = bound_corollary2_lp(problem);
      CHECK(lp.value < bound_corollary1(L, 0.05 * k, 12, 12));
      CHECK(lp.solution.gap < 1e-9);
    }
    const auto full = GuessBoundProblem::from_formula(L, 1.0, 12, 1000);
    CHECK(bound_corollary2_lp(full).value / full.Lprime / full.gamma_prime - 0.5 < 0.05);
  }

  TEST_CASE("exhaustive min-max on small sequences") {
    const LegendrePrime L7(7);
    const std::uint64_t pair[] = {0, 1};
    CHECK(bruteforce_minmax(L7, pair, 3) == 3);
    CHECK(bruteforce_minmax(L7, pair, 7) == 5);
    const std::uint64_t single[] = {4};
    const auto one = bruteforce_minmax(L7, single);
    for (std::uint64_t n = 0; n <= 7; ++n) CHECK(one[n] == n);

    for (std::uint64_t p : {7ULL, 11ULL}) {
      const LegendrePrime L(p);
      for (const std::vector<std::uint64_t>& keys : {std::vector<std::uint64_t>{0, 1},
                                                     std::vector<std::uint64_t>{2, 5},
                                                     std::vector<std::uint64_t>{0, 3, 4}}) {
        CHECK(bruteforce_minmax(L, keys) == literal_minmax(L, keys));
      }
    }
    const std::uint64_t dup[] = {1, 1};
    CHECK_THROWS_AS((void)bruteforce_minmax(L7, dup), ParameterError);
    CHECK_THROWS_AS((void)bruteforce_minmax(LegendrePrime(43), pair), ParameterError);
  }

  TEST_CASE("closed form with exact excess dominates the exhaustive optimum") {
    RandomStream rng(CounterRng(31));
    for (std::uint64_t p : {7ULL, 11ULL, 19ULL, 23ULL}) {
      const LegendrePrime L(p);
      std::vector<std::vector<std::uint64_t>> sets;
      for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = a + 1; b < p; ++b) sets.push_back({a, b});
      for (int t = 0; t < 50; ++t) {
        std::vector<std::uint64_t> keys;
        while (keys.size() < 3) {
          const auto k = rng.below(p);
          if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
        }
        sets.push_back(keys);
      }
      for (const auto& keys : sets) {
        const int s = static_cast<int>(keys.size());
        const double W = exact_pattern_excess(L, keys);
        const auto best = bruteforce_minmax(L, keys);
        for (std::uint64_t n = 1; n <= p; ++n) {
          const double gamma = static_cast<double>(n) / static_cast<double>(p);
          const auto problem = GuessBoundProblem::with_deviation(static_cast<double>(p), gamma, s, s, W);
          REQUIRE(static_cast<double>(best[n]) <= bound_corollary1(problem) + 1e-9);
        }
      }
    }
  }

  TEST_CASE("exact pattern excess") {
    const LegendrePrime L7(7);
    const std::uint64_t pair[] = {0, 1};
    // Counts for (ā_j, ā_{j+1}) are 2, 2, 2, 1 against 7/4.
    CHECK(exact_pattern_excess(L7, pair) == doctest::Approx(0.25).epsilon(1e-15));
  }
}
