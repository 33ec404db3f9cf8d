#include "prbqkd/seedguess.hpp"

#include <cmath>
#include <numbers>

#include "prbqkd/errors.hpp"
#include "prbqkd/parallel.hpp"
#include "prbqkd/protocol.hpp"

namespace prbqkd {

AngleIndex extended_angle_index(std::int64_t i, std::span<const std::uint64_t> keys, const LegendrePrime& prime) {
  if (keys.size() < 2 || keys.size() > 17) throw ParameterError("extended key set needs 2..17 seeds");
  std::uint32_t j = 0;
  for (auto k : keys) j = (j << 1) | static_cast<std::uint32_t>(prng_bit(i, k, prime));
  return AngleIndex{j};
}

double observation_likelihood(const EveObservation& e, AngleIndex phi, std::uint32_t basis_count) {
  const double beta = to_radians(e.beta, basis_count);
  const double ph = to_radians(phi, basis_count);
  const double pi = std::numbers::pi;
  const double v = 1.0 - e.c + std::cos(2.0 * (beta - ph) + pi * (e.x - e.z) - pi * e.c / 2.0);
  return v * v / 8.0;
}

ObservationMarginals observation_marginals() { return {}; }

SeedEstimate ml_seed_estimate(std::span<const PositionedObservation> observations, const LegendrePrime& prime,
                              int register_count) {
  if (register_count < 1 || register_count > 16) throw ParameterError("register count m must lie in [1, 16]");
  const std::uint64_t L = prime.value();
  const int registers = register_count + 1;
  if (std::pow(static_cast<double>(L), registers) > kSeedEnumerationLimit)
    throw EnumerationLimitError("seed enumeration L^(m+1) exceeds 1e7");
  const std::uint32_t M = 1u << register_count;
  const std::size_t n = observations.size();

  // bit[j][k] = a_{i_j}(k); lik[j][φ] = p(e_j | φ).
  std::vector<std::vector<std::uint8_t>> bit(n, std::vector<std::uint8_t>(L));
  std::vector<std::vector<double>> lik(n, std::vector<double>(2 * M));
  for (std::size_t j = 0; j < n; ++j) {
    const auto& o = observations[j];
    if (o.e.beta.value >= 2 * M) throw ParameterError("observation basis outside the extended grid");
    for (std::uint64_t k = 0; k < L; ++k)
      bit[j][k] = static_cast<std::uint8_t>(prng_bit(static_cast<std::int64_t>(o.position), k, prime));
    for (std::uint32_t phi = 0; phi < 2 * M; ++phi) lik[j][phi] = observation_likelihood(o.e, AngleIndex{phi}, M);
  }

  std::uint64_t inner = 1;
  for (int r = 1; r < registers; ++r) inner *= L;

  struct Partial {
    double total = 0.0;
    double best = -1.0;
    std::uint64_t best_index = 0;
  };
  // One task per register-0 seed; results are merged in seed order.
  const auto partials = parallel_map(static_cast<std::size_t>(L), [&](std::size_t k0) {
    Partial p;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(registers), 0);
    digits[0] = k0;
    for (std::uint64_t idx = 0; idx < inner; ++idx) {
      std::uint64_t rest = idx;
      for (int r = registers - 1; r >= 1; --r) {
        digits[static_cast<std::size_t>(r)] = rest % L;
        rest /= L;
      }
      double w = 1.0;
      for (std::size_t j = 0; j < n && w > 0.0; ++j) {
        std::uint32_t phi = 0;
        for (auto k : digits) phi = (phi << 1) | bit[j][k];
        w *= lik[j][phi];
      }
      p.total += w;
      if (w > p.best) {
        p.best = w;
        p.best_index = idx;
      }
    }
    return p;
  });

  double total = 0.0;
  double best = -1.0;
  std::uint64_t best_k0 = 0;
  std::uint64_t best_inner = 0;
  for (std::size_t k0 = 0; k0 < partials.size(); ++k0) {
    total += partials[k0].total;
    if (partials[k0].best > best) {
      best = partials[k0].best;
      best_k0 = k0;
      best_inner = partials[k0].best_index;
    }
  }
  if (!(total > 0.0)) throw NumericError("observations have zero likelihood under every key");

  SeedEstimate out;
  out.keys.assign(static_cast<std::size_t>(registers), 0);
  out.keys[0] = best_k0;
  for (int r = registers - 1; r >= 1; --r) {
    out.keys[static_cast<std::size_t>(r)] = best_inner % L;
    best_inner /= L;
  }
  out.posterior_max = best / total;
  return out;
}

std::vector<PositionedObservation> simulate_observations(std::span<const std::uint64_t> keys,
                                                         const LegendrePrime& prime,
                                                         std::span<const std::uint64_t> positions,
                                                         RandomStream& rng) {
  const auto register_count = static_cast<int>(keys.size()) - 1;
  if (register_count < 1) throw ParameterError("extended key set needs at least 2 seeds");
  const std::uint32_t M = 1u << register_count;
  std::vector<PositionedObservation> out;
  out.reserve(positions.size());
  for (auto pos : positions) {
    const AngleIndex phi = extended_angle_index(static_cast<std::int64_t>(pos), keys, prime);
    PositionedObservation o;
    o.position = pos;
    o.e.x = rng.bit();
    o.e.beta = AngleIndex{static_cast<std::uint32_t>(rng.below(2 * M))};
    const std::uint32_t grid = 2 * M;
    const AngleIndex state{(phi.value + static_cast<std::uint32_t>(o.e.x) * M) % grid};
    o.e.z = measure(state, o.e.beta, M, rng.uniform());
    const AngleIndex resent{(o.e.beta.value + static_cast<std::uint32_t>(o.e.z) * M) % grid};
    const int y = measure(resent, phi, M, rng.uniform());
    o.e.c = o.e.x ^ y;
    out.push_back(o);
  }
  return out;
}

double guess_probability_bound(double l, std::uint64_t n0, std::uint64_t n1) {
  if (!(l >= 0.0)) throw ParameterError("seed length l must be nonnegative");
  const double exponent = -l + static_cast<double>(n0) * std::log2(8.0 / 3.0) + static_cast<double>(n1);
  return exponent >= 0.0 ? 1.0 : std::exp2(exponent);
}

double interceptions_needed(double l) {
  if (!(l >= 0.0)) throw ParameterError("seed length l must be nonnegative");
  return l / (2.5 - 0.75 * std::log2(3.0));
}

}  // namespace prbqkd
