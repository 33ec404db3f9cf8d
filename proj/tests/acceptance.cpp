// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"
#include "prbqkd/analytics.hpp"
#include "prbqkd/bounds.hpp"
#include "prbqkd/eavesdrop.hpp"
#include "prbqkd/errors.hpp"
#include "prbqkd/legendre.hpp"
#include "prbqkd/parallel.hpp"
#include "prbqkd/pns.hpp"
#include "prbqkd/protocol.hpp"
#include "prbqkd/rng.hpp"
#include "prbqkd/seedguess.hpp"

using namespace prbqkd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Mean empirical QBER over `trials` uniform-guess sessions with random keys.
double simulate_qber(std::uint64_t L, int m, double gamma, int trials, std::uint64_t seed) {
  const LegendrePrime prime(L);
  const CounterRng root(seed);
  const auto qbers = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
    const CounterRng trial = root.split(t);
    RandomStream key_rng(role_stream(trial, Role::Keys));
    std::vector<std::uint64_t> keys;
    for (int r = 0; r < m; ++r) keys.push_back(key_rng.below(L));
    const ProtocolParams p{prime, RegisterKeySet(keys, prime), L, 1.0, 0.0, trial.bits(0)};
    return transcript_qber(run_session(p, EveStrategy{gamma, UniformGuess{}}));
  });
  double mean = 0.0;
  for (double q : qbers) mean += q / trials;
  return mean;
}

double bernoulli_sigma(double p, double draws) { return std::sqrt(p * (1 - p) / draws); }

Outcome criterion1() {
  Outcome o;
  o.require(std::abs(zeta(2) - 0.5) < 1e-12, "zeta(2) != 0.5");
  double previous = 1.0;
  for (std::uint64_t M = 2; M <= 4096; M *= 2) {
    const double z = zeta(M);
    o.require(z < previous, "zeta not strictly decreasing at M=" + std::to_string(M));
    previous = z;
  }
  o.require(std::abs(zeta(4096) - 0.4427) < 5e-4, "zeta(4096) = " + num(zeta(4096)));
  o.detail = o.pass ? "zeta(4096)=" + num(zeta(4096)) : o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  RandomStream rng(CounterRng(2));
  std::size_t primes = 0;
  for (std::uint64_t p = 3; p < 2000; p += 4) {
    if (!trial_division_prime(p)) continue;
    ++primes;
    LegendrePrime L(p);
    L.build_table();
    for (int t = 0; t < 50; ++t) {
      const auto a = static_cast<std::int64_t>(rng.below(p));
      auto b = static_cast<std::int64_t>(rng.below(p));
      while (b == a) b = static_cast<std::int64_t>(rng.below(p));
      const std::int64_t offsets[] = {a, b};
      for (int bits = 0; bits < 4; ++bits) {
        const int pattern[] = {bits >> 1, bits & 1};
        const std::uint64_t expected = bits == 3 ? (p - 3) / 4 : (p + 1) / 4;
        o.require(pattern_count(offsets, pattern, L) == expected, "pair count mismatch at L=" + std::to_string(p));
      }
    }
  }
  for (std::uint64_t p : {103ULL, 1019ULL}) {
    const LegendrePrime L(p);
    for (int s = 3; s <= 4; ++s) {
      const double W = pattern_deviation_bound(s, static_cast<double>(p));
      for (int t = 0; t < 200; ++t) {
        std::vector<std::int64_t> offsets;
        while (offsets.size() < static_cast<std::size_t>(s)) {
          const auto v = static_cast<std::int64_t>(rng.below(p));
          if (std::find(offsets.begin(), offsets.end(), v) == offsets.end()) offsets.push_back(v);
        }
        std::vector<int> bits;
        for (int j = 0; j < s; ++j) bits.push_back(rng.bit());
        const double d = static_cast<double>(pattern_count(offsets, bits, L));
        o.require(std::abs(d - std::ldexp(static_cast<double>(p), -s)) <= W,
                  "W(s) exceeded at L=" + std::to_string(p));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(primes) + " primes";
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (double gamma : {0.4, 1.0}) {
    const double mean = simulate_qber(1019, 1, gamma, 50, 3);
    const double expected = gamma / 4;
    const double sigma = bernoulli_sigma(expected, 50.0 * 1019);
    o.require(std::abs(mean - expected) <= 3 * sigma,
              "gamma=" + num(gamma) + " mean " + num(mean) + " vs " + num(expected));
    o.detail += "g=" + num(gamma) + ":" + num(mean) + " ";
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int m = 1; m <= 3; ++m) {
    const double mean = simulate_qber(1019, m, 1.0, 50, 4);
    const double expected = qber_from_gamma(1.0, delta_distribution(0.5, m));
    const double sigma = bernoulli_sigma(expected, 50.0 * 1019);
    o.require(std::abs(mean - expected) <= 3 * sigma,
              "m=" + std::to_string(m) + " mean " + num(mean) + " vs " + num(expected));
    o.detail += "m=" + std::to_string(m) + ":" + num(mean) + " ";
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double L = 9'999'999'967.0;
  o.require(bound_theorem1(L, 1.0, 2) == 0.75 * L, "s=2 gamma=1");
  o.require(bound_theorem1(L, 0.5, 2) == 0.5 * L, "s=2 gamma=0.5");
  const double ratio = bound_theorem1(L, 0.5, 10000) / (0.5 * L);
  o.require(std::abs(ratio - 0.5) < 0.02, "S=1e4 ratio " + num(ratio));
  if (o.pass) o.detail = "ratio(S=1e4)=" + num(ratio);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  for (int S : {2, 3, 5, 8, 12}) {
    for (double g : {0.1, 0.3, 0.5, 0.7, 1.0}) {
      const double lp = bound_corollary2_lp(GuessBoundProblem::with_deviation(1e6, g, S, S, 0.0)).value;
      const double t1 = bound_theorem1(1e6, g, S);
      worst = std::max(worst, std::abs(lp - t1) / t1);
    }
  }
  o.require(worst < 1e-8, "LP vs bound_theorem1 rel diff " + num(worst));
  const double L = 9'999'999'967.0;
  double min_margin = 1.0;
  for (int k = 1; k <= 20; ++k) {
    const double g = 0.05 * k;
    const auto problem = GuessBoundProblem::from_formula(L, g, 12, 1000);
    const double lp = bound_corollary2_lp(problem).value;
    const double cor1 = bound_corollary1(L, g, 12, 12);
    min_margin = std::min(min_margin, (cor1 - lp) / problem.Lprime);
    o.require(lp < cor1, "LP not below bound_corollary1 at gamma=" + num(g));
  }
  if (o.pass) o.detail = "max rel diff " + num(worst) + ", min margin " + num(min_margin);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const LegendrePrime L7(7);
  const std::uint64_t pair01[] = {0, 1};
  o.require(bruteforce_minmax(L7, pair01, 3) == 3, "L=7 {0,1} n=3");
  RandomStream rng(CounterRng(7));
  std::size_t instances = 0;
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
        const auto problem = GuessBoundProblem::with_deviation(static_cast<double>(p),
                                                               static_cast<double>(n) / static_cast<double>(p), s, s, W);
        o.require(static_cast<double>(best[n]) <= bound_corollary1(problem) + 1e-9,
                  "domination fails at L=" + std::to_string(p) + " n=" + std::to_string(n));
        ++instances;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(instances) + " instances";
  return o;
}

Outcome criterion8() {
  Outcome o;
  // Independent bisection on 1 - h(q) - 2q.
  auto g = [](double q) { return 1.0 - binary_entropy(q) - 2.0 * q; };
  double lo = 0.01, hi = 0.4;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0 ? lo : hi) = mid;
  }
  const double q_star = 0.5 * (lo + hi);
  o.require(std::abs(q_star - 0.1713) <= 1e-3, "q* = " + num(q_star));
  o.require(rate_bb84(q_star + 1e-9, 1.0) == 0.0 && rate_bb84(q_star - 1e-6, 1.0) > 0.0,
            "rate_bb84 does not cross zero at q*");
  for (int k = 1; k < 150; ++k) {
    const double q = k / 1000.0;
    const double bb84 = rate_bb84(q, 1.0);
    o.require(rate_prb_asymptotic(q, 1.0, 1024) >= 2 * bb84, "PRB/BB84 < 2 at q=" + num(q));
    o.require(rate_prb_asymptotic(q, 1.0, 2) >= 2 * bb84 * (1 - 1e-12), "M=2 PRB/BB84 < 2 at q=" + num(q));
  }
  std::size_t compared = 0;
  for (double f : {1.0, 1.22}) {
    RateModelConfig c;
    c.f = f;
    const RateModel model(c);
    for (int k = 0; k <= 50; ++k) {
      const double q = 0.005 * k;
      double prb = 0.0;
      try {
        prb = model.rate_prb(q);
      } catch (const QberUnachievableError&) {
        prb = 0.0;
      }
      const double abb84 = rate_abb84(q, f, 1e7, 1e-6).R;
      if (prb > 0.0 && abb84 > 0.0) {
        ++compared;
        o.require(prb >= abb84, "PRB below aBB84 at f=" + num(f) + " q=" + num(q));
      }
    }
  }
  if (o.pass) o.detail = "q*=" + num(q_star) + ", " + std::to_string(compared) + " lossy points";
  return o;
}

Outcome criterion9() {
  Outcome o;
  o.require(observation_likelihood({0, 0, 0, AngleIndex{1}}, AngleIndex{1}, 2) == 0.5, "p(e|beta) != 1/2");
  o.require(std::abs(observation_likelihood({0, 0, 1, AngleIndex{0}}, AngleIndex{1}, 2) - 0.125) < 1e-15,
            "p(e|beta+pi/4) != 1/8");
  const auto marg = observation_marginals();
  o.require(marg.p_e_no_error == 3.0 / 16 && marg.p_e_error == 1.0 / 16 && marg.p_c0 == 0.75 && marg.p_c1 == 0.25,
            "marginals");
  for (int m = 1; m <= 3; ++m) {
    const std::uint32_t M = 1u << m;
    for (std::uint32_t beta = 0; beta < 2 * M; ++beta)
      for (std::uint32_t phi = 0; phi < 2 * M; ++phi) {
        double sum = 0.0;
        for (int cls = 0; cls < 8; ++cls)
          sum += observation_likelihood({cls & 1, (cls >> 1) & 1, cls >> 2, AngleIndex{beta}}, AngleIndex{phi}, M);
        o.require(std::abs(sum - 1.0) < 1e-12, "normalization at m=" + std::to_string(m));
      }
  }
  const double coeff = interceptions_needed(1.0);
  o.require(std::abs(coeff - 0.76) <= 0.01, "coefficient " + num(coeff));
  if (o.pass) o.detail = "coefficient=" + num(coeff);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const double p = succ_prob_lower_bound(16, 64);
  o.require(std::abs(p - 0.999985) <= 1e-6, "p_succ(16,64) = " + num(p));
  const LegendrePrime L(1019);
  RandomStream rng(CounterRng(10));
  std::vector<std::uint64_t> positions;
  while (positions.size() < 100) {
    const auto v = rng.below(1019);
    if (std::find(positions.begin(), positions.end(), v) == positions.end()) positions.push_back(v);
  }
  double exponent = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const auto k = rng.below(1019);
    auto k2 = rng.below(1019);
    while (k2 == k) k2 = rng.below(1019);
    exponent += std::log2(overlap_sq_sum(k, k2, positions, L)) / 100.0 / 50.0;
  }
  o.require(std::abs(exponent + 0.5) <= 0.1, "overlap exponent " + num(exponent));
  for (std::uint64_t q : {7ULL, 11ULL, 1019ULL}) {
    const double v = discrimination_bound_exact(LegendrePrime(q), {});
    o.require(v == 1.0 / static_cast<double>(q), "n=0 bound at L=" + std::to_string(q) + " is " + num(v));
  }
  if (o.pass) o.detail = "p_succ=" + num(p) + ", exponent=" + num(exponent);
  return o;
}

Outcome criterion11() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"zeta"},
      {"rates", "--qstep", "0.05"},
      {"bounds"},
      {"simulate", "--L", "1019", "--trials", "10", "--gamma", "0.7", "--seed", "11"},
      {"simulate", "--L", "103", "--m", "2", "--trials", "5", "--noise", "0.01", "--reception", "0.5",
       "--strategy", R"({"gamma": 0.5, "mode": "key_subset_majority", "candidates": [[1, 2], [3]]})"},
      {"seed-guess", "--L", "103", "--trials", "10", "--seed", "5"},
      {"pns"},
      {"pns", "--format", "json"}};
  for (const auto& c : commands) {
    std::ostringstream a, b, err;
    const int ca = cli::run_command(c, a, err);
    const int cb = cli::run_command(c, b, err);
    o.require(ca == 0 && cb == 0, "command '" + c.front() + "' failed: " + err.str());
    o.require(a.str() == b.str() && !a.str().empty(), "command '" + c.front() + "' not reproducible");
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " commands";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double time_limit;  // seconds
  };
  const std::vector<Criterion> criteria{
      {"1 zeta function", criterion1, 1},
      {"2 pattern exactness", criterion2, 30},
      {"3 two-basis intercept-resend Monte Carlo", criterion3, 30},
      {"4 multibasis Monte Carlo", criterion4, 60},
      {"5 closed-form bound", criterion5, 60},
      {"6 LP consistency", criterion6, 120},
      {"7 oracle domination", criterion7, 120},
      {"8 rate relations", criterion8, 60},
      {"9 seed-guess exactness", criterion9, 60},
      {"10 PNS", criterion10, 60},
      {"11 determinism", criterion11, 120},
  };
  int failures = 0;
  for (const auto& [name, fn, limit] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > limit) {
      outcome.pass = false;
      outcome.detail += " exceeded the " + num(limit) + "s budget";
    }
    std::printf("%s criterion %s: %s (%.2fs)\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), seconds);
    failures += outcome.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
