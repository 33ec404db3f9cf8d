#include "prbqkd/eavesdrop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <json.hpp>

#include "prbqkd/errors.hpp"

namespace prbqkd {

namespace {

int majority_bit(std::span<const std::uint64_t> candidates, std::uint64_t position,
                 const LegendrePrime& prime) {
  std::size_t weight = 0;
  for (auto k : candidates) weight += static_cast<std::size_t>(prng_bit(static_cast<std::int64_t>(position), k, prime));
  return 2 * weight > candidates.size() ? 1 : 0;
}

}  // namespace

void EveStrategy::validate(int register_count, const LegendrePrime& prime, std::uint64_t pulses) const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  if (pulses == 0) throw ParameterError("pulse count must be positive");
  if (const auto* majority = std::get_if<KeySubsetMajority>(&mode)) {
    if (static_cast<int>(majority->register_candidates.size()) != register_count)
      throw ParameterError("key_subset_majority needs one candidate subset per register");
    for (const auto& subset : majority->register_candidates) {
      if (subset.empty()) throw ParameterError("candidate key subsets must be nonempty");
      for (auto k : subset) {
        if (k >= prime.value()) throw ParameterError("candidate key outside [0, L)");
      }
    }
  }
}

std::uint64_t intercept_count(double gamma, std::uint64_t pulses) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  // The small slack keeps γ = n/N (e.g. 3/7) from rounding up to n + 1.
  const double raw = std::ceil(gamma * static_cast<double>(pulses) - 1e-9);
  return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(raw), 1, pulses);
}

MajoritySelection select_positions_majority(std::span<const std::uint64_t> candidates, double gamma,
                                            const LegendrePrime& prime, std::uint64_t pulses) {
  if (candidates.empty()) throw ParameterError("candidate key set is empty");
  if (pulses > prime.value()) throw ParameterError("pulse count must not exceed L");
  for (auto k : candidates) {
    if (k >= prime.value()) throw ParameterError("candidate key outside [0, L)");
  }
  const std::uint64_t n = intercept_count(gamma, pulses);
  const auto s = static_cast<std::int64_t>(candidates.size());

  struct Ranked {
    std::uint64_t position;
    std::int64_t extremity;  // |2·HW - s| = 2·|HW - s/2|
    int guess;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(pulses);
  for (std::uint64_t i = 0; i < pulses; ++i) {
    std::int64_t weight = 0;
    for (auto k : candidates) weight += prng_bit(static_cast<std::int64_t>(i), k, prime);
    ranked.push_back({i, std::abs(2 * weight - s), 2 * weight > s ? 1 : 0});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.extremity > b.extremity; });
  ranked.resize(n);
  std::sort(ranked.begin(), ranked.end(),
            [](const Ranked& a, const Ranked& b) { return a.position < b.position; });

  MajoritySelection out;
  out.positions.reserve(n);
  out.guesses.reserve(n);
  for (const auto& r : ranked) {
    out.positions.push_back(r.position);
    out.guesses.push_back(r.guess);
  }
  return out;
}

EvePlan build_eve_bases(const EveStrategy& strategy, int register_count, const LegendrePrime& prime,
                        std::uint64_t pulses, RandomStream& rng) {
  strategy.validate(register_count, prime, pulses);
  EvePlan plan;
  plan.basis_count = 1u << register_count;
  const std::uint64_t n = intercept_count(strategy.gamma, pulses);

  if (std::holds_alternative<UniformGuess>(strategy.mode)) {
    // Partial Fisher-Yates: the first n slots become a uniform n-subset.
    std::vector<std::uint64_t> order(pulses);
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t j = i + rng.below(pulses - i);
      std::swap(order[i], order[j]);
    }
    order.resize(n);
    std::sort(order.begin(), order.end());
    plan.positions = std::move(order);
    plan.betas.reserve(n);
    for (std::size_t i = 0; i < plan.positions.size(); ++i)
      plan.betas.push_back(AngleIndex{static_cast<std::uint32_t>(rng.below(plan.basis_count))});
    return plan;
  }

  const auto& majority = std::get<KeySubsetMajority>(strategy.mode);
  // Register 1 carries the most significant angle bit, so it picks positions.
  const auto selection =
      select_positions_majority(majority.register_candidates.front(), strategy.gamma, prime, pulses);
  plan.positions = selection.positions;
  plan.betas.reserve(plan.positions.size());
  for (std::size_t idx = 0; idx < plan.positions.size(); ++idx) {
    std::uint32_t beta = static_cast<std::uint32_t>(selection.guesses[idx]);
    for (int r = 1; r < register_count; ++r) {
      const auto& subset = majority.register_candidates[static_cast<std::size_t>(r)];
      beta = (beta << 1) | static_cast<std::uint32_t>(majority_bit(subset, plan.positions[idx], prime));
    }
    plan.betas.push_back(AngleIndex{beta});
  }
  return plan;
}

std::uint64_t count_correct_guesses(const EvePlan& plan, const RegisterKeySet& actual,
                                    const LegendrePrime& prime, int register_index) {
  const int m = actual.register_count();
  if (register_index < 1 || register_index > m) throw ParameterError("register index out of range");
  if (plan.basis_count != actual.basis_count())
    throw ParameterError("plan basis count does not match the key set");
  const int shift = m - register_index;
  const std::uint64_t k = actual.key(register_index);
  std::uint64_t correct = 0;
  for (std::size_t idx = 0; idx < plan.positions.size(); ++idx) {
    const int eve_bit = static_cast<int>((plan.betas[idx].value >> shift) & 1u);
    correct += eve_bit == prng_bit(static_cast<std::int64_t>(plan.positions[idx]), k, prime) ? 1 : 0;
  }
  return correct;
}

std::vector<double> key_posterior_given_z(std::span<const int> outcomes,
                                          std::span<const std::uint64_t> positions,
                                          std::span<const AngleIndex> betas, const LegendrePrime& prime,
                                          int register_count) {
  if (outcomes.size() != positions.size() || betas.size() != positions.size())
    throw ParameterError("outcomes, positions and betas must have equal length");
  if (register_count < 1) throw ParameterError("register count must be >= 1");
  const std::uint64_t L = prime.value();
  double total_keys = std::pow(static_cast<double>(L), register_count);
  if (total_keys > static_cast<double>(kPosteriorKeyLimit))
    throw EnumerationLimitError("key posterior enumeration exceeds 1e6 keys");
  const auto key_total = static_cast<std::size_t>(total_keys);
  const std::uint32_t M = 1u << register_count;

  std::vector<double> weights(key_total, 0.0);
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(register_count), 0);
  for (std::size_t key_index = 0; key_index < key_total; ++key_index) {
    std::size_t rest = key_index;
    for (int r = register_count - 1; r >= 0; --r) {
      digits[static_cast<std::size_t>(r)] = rest % L;
      rest /= L;
    }
    const RegisterKeySet keys(digits, prime);
    double likelihood = 1.0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
      const AngleIndex phi = basis_angle_index(static_cast<std::int64_t>(positions[j]), keys, prime);
      // p(z|φ) = ½ Σ_x cos²(β + zπ/2 - φ - xπ/2); Eve does not know x.
      double pz = 0.0;
      for (int x = 0; x < 2; ++x) {
        const double state = static_cast<double>(phi.value) + x * static_cast<double>(M);
        const double diff = std::numbers::pi * (static_cast<double>(betas[j].value) - state) /
                            (2.0 * static_cast<double>(M));
        const double c = std::cos(diff + std::numbers::pi / 2.0 * outcomes[j]);
        pz += 0.5 * c * c;
      }
      likelihood *= pz;
    }
    weights[key_index] = likelihood;  // uniform prior
  }
  const double norm = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (auto& w : weights) w /= norm;
  return weights;
}

std::string strategy_to_json(const EveStrategy& strategy) {
  nlohmann::json j;
  j["gamma"] = strategy.gamma;
  if (const auto* majority = std::get_if<KeySubsetMajority>(&strategy.mode)) {
    j["mode"] = "key_subset_majority";
    j["candidates"] = majority->register_candidates;
  } else {
    j["mode"] = "uniform_guess";
  }
  return j.dump();
}

EveStrategy strategy_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError(std::string("strategy JSON does not parse: ") + e.what());
  }
  try {
    EveStrategy s;
    s.gamma = j.at("gamma").get<double>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "uniform_guess") {
      s.mode = UniformGuess{};
    } else if (mode == "key_subset_majority") {
      s.mode = KeySubsetMajority{j.at("candidates").get<std::vector<std::vector<std::uint64_t>>>()};
    } else {
      throw ParameterError("unknown strategy mode '" + mode + "'");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed strategy JSON: ") + e.what());
  }
}

}  // namespace prbqkd
