#include "prbqkd/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "prbqkd/bounds.hpp"
#include "prbqkd/errors.hpp"

namespace prbqkd {

namespace {

constexpr double kPi = std::numbers::pi;

void check_power_of_two(std::uint64_t M) {
  if (M < 2 || !std::has_single_bit(M)) throw ParameterError("basis count M must be a power of two >= 2");
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("QBER must lie in [0, 1]");
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binary_entropy needs p in [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double intercept_error_prob(double delta_radians) {
  const double s = std::sin(2.0 * delta_radians);
  return 0.5 * s * s;
}

double intercept_error_prob(AngleIndex delta, std::uint32_t basis_count) {
  return intercept_error_prob(to_radians(delta, basis_count));
}

std::vector<double> delta_distribution(double rho_correct, int register_count) {
  if (!(rho_correct >= 0.0 && rho_correct <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
  if (register_count < 1 || register_count > 20) throw ParameterError("register count must lie in [1, 20]");
  const std::uint32_t M = 1u << register_count;
  std::vector<double> p(M);
  for (std::uint32_t t = 0; t < M; ++t) {
    const int ones = std::popcount(t);
    p[t] = std::pow(rho_correct, register_count - ones) * std::pow(1.0 - rho_correct, ones);
  }
  return p;
}

double qber_from_gamma(double gamma, std::span<const double> p_t) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0, 1]");
  check_power_of_two(p_t.size());
  const double M = static_cast<double>(p_t.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < p_t.size(); ++t) sum += p_t[t] * (1.0 - std::cos(2.0 * kPi * t / M));
  return gamma / 4.0 * sum;
}

double zeta(std::uint64_t basis_count) {
  check_power_of_two(basis_count);
  const double M = static_cast<double>(basis_count);
  double sum = 0.0;
  for (std::uint64_t j = 0; j < basis_count; ++j) {
    const double c = std::cos(kPi * static_cast<double>(j) / (2.0 * M));
    sum += binary_entropy(std::clamp(c * c, 0.0, 1.0));
  }
  return 1.0 - sum / M;
}

std::string_view to_string(BoundSource source) {
  switch (source) {
    case BoundSource::TrulyRandom: return "truly_random";
    case BoundSource::Theorem1: return "theorem1";
    case BoundSource::Corollary1: return "corollary1";
    case BoundSource::Corollary2LP: return "corollary2_lp";
  }
  return "unknown";
}

BoundSource bound_source_from_string(std::string_view name) {
  for (auto s : {BoundSource::TrulyRandom, BoundSource::Theorem1, BoundSource::Corollary1,
                 BoundSource::Corollary2LP}) {
    if (to_string(s) == name) return s;
  }
  throw ParameterError("unknown bound source '" + std::string(name) + "'");
}

int RateModelConfig::key_subset_size() const {
  if (S_keys) return *S_keys;
  return std::max(2, static_cast<int>(std::lround(epsilon * L / register_count)));
}

RateModel::RateModel(RateModelConfig config) : config_(std::move(config)) {
  if (!config_.f_of_q && !(config_.f >= 1.0)) throw ParameterError("efficiency f must be >= 1");
  if (config_.register_count < 1 || config_.register_count > 16)
    throw ParameterError("register count m must lie in [1, 16]");
  if (!(config_.epsilon > 0.0 && config_.epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(config_.N_r >= 1.0)) throw ParameterError("N_r must be >= 1");
  if (!(config_.L > 0.0)) throw ParameterError("L must be positive");
  S_keys_ = config_.key_subset_size();
  if (config_.bound_source != BoundSource::TrulyRandom) {
    if (S_keys_ < 2) throw ParameterError("key subset size S must be >= 2");
    if (config_.bound_source != BoundSource::Theorem1 && S_keys_ < config_.s_pattern)
      throw ParameterError("key subset size S must be >= pattern order s");
  }
  if (config_.bound_source == BoundSource::Corollary2LP)
    lp_ = std::make_unique<Corollary2Program>(config_.s_pattern, S_keys_);

  const std::uint32_t M = basis_count();
  h_cos2_.resize(M);
  for (std::uint32_t t = 0; t < M; ++t) {
    const double c = std::cos(kPi * t / (2.0 * M));
    h_cos2_[t] = binary_entropy(std::clamp(c * c, 0.0, 1.0));
  }

  // Bisection in gamma_from_qber relies on q(γ) being monotone.
  constexpr int kScan = 32;
  double previous = 0.0;
  for (int k = 1; k <= kScan; ++k) {
    const double q = qber(static_cast<double>(k) / kScan);
    if (q < previous - 1e-15)
      throw NumericError("q(gamma) is not monotone for bound source " + std::string(to_string(config_.bound_source)));
    previous = q;
  }
  q_max_ = previous;
}

RateModel::~RateModel() = default;
RateModel::RateModel(RateModel&&) noexcept = default;
RateModel& RateModel::operator=(RateModel&&) noexcept = default;

double RateModel::rho(double gamma) const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  const double L = config_.L;
  double n_correct = 0.0;
  switch (config_.bound_source) {
    case BoundSource::TrulyRandom: return 0.5;
    case BoundSource::Theorem1: n_correct = bound_theorem1(L, gamma, S_keys_); break;
    case BoundSource::Corollary1: n_correct = bound_corollary1(L, gamma, config_.s_pattern, S_keys_); break;
    case BoundSource::Corollary2LP: {
      const auto problem = GuessBoundProblem::from_formula(L, gamma, config_.s_pattern, S_keys_);
      n_correct = lp_->solve(problem.gamma_prime).nu_correct * problem.Lprime;
      break;
    }
  }
  return std::clamp(n_correct / (gamma * L), 0.5, 1.0);
}

double RateModel::qber(double gamma) const {
  if (gamma == 0.0) return 0.0;
  return qber_from_gamma(gamma, delta_distribution(rho(gamma), config_.register_count));
}

double RateModel::gamma_from_qber(double q) const {
  check_q(q);
  if (q == 0.0) return 0.0;
  if (q > q_max_ * (1.0 + 1e-12))
    throw QberUnachievableError("QBER " + std::to_string(q) + " exceeds the intercept-resend maximum " +
                                std::to_string(q_max_));
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 64 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (qber(mid) < q) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double RateModel::eve_info(double q) const {
  const double gamma = gamma_from_qber(q);
  if (gamma == 0.0) return 0.0;
  const auto p = delta_distribution(rho(gamma), config_.register_count);
  double sum = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) sum += p[t] * h_cos2_[t];
  return gamma * (1.0 - sum);
}

double RateModel::rate_prb(double q) const {
  check_q(q);
  return std::max(0.0, 1.0 - config_.efficiency(q) * binary_entropy(q) - eve_info(q));
}

double rate_prb_asymptotic(double q, double f, std::uint64_t basis_count) {
  check_q(q);
  return std::max(0.0, 1.0 - f * binary_entropy(q) - 4.0 * q * zeta(basis_count));
}

double rate_bb84(double q, double f) {
  check_q(q);
  return std::max(0.0, 0.5 * (1.0 - f * binary_entropy(q) - 2.0 * q));
}

double hoeffding_delta(double trials, double epsilon) {
  if (!(trials > 0.0)) throw ParameterError("Hoeffding trial count must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  return std::sqrt(std::log(1.0 / epsilon) / (2.0 * trials));
}

double abb84_rate_at(double p, double q, double f, double N_r, double epsilon) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("test-basis probability p must lie in (0, 1]");
  check_q(q);
  if (p == 1.0) return 0.0;
  const double keep = (1.0 - p) * (1.0 - p);
  return keep * (1.0 - f * binary_entropy(q) - 2.0 * (q + hoeffding_delta(p * p * N_r, epsilon)));
}

Abb84Rate rate_abb84(double q, double f, double N_r, double epsilon) {
  if (!(N_r >= 1.0)) throw ParameterError("N_r must be >= 1");
  constexpr int kGrid = 512;
  constexpr double kLogMin = -6.0;
  auto grid_p = [](int k) { return std::pow(10.0, kLogMin * (1.0 - static_cast<double>(k) / kGrid)); };
  auto rate = [&](double p) { return abb84_rate_at(p, q, f, N_r, epsilon); };

  int best = 0;
  double best_rate = rate(grid_p(0));
  for (int k = 1; k < kGrid; ++k) {
    const double r = rate(grid_p(k));
    if (r > best_rate) {
      best_rate = r;
      best = k;
    }
  }

  // The objective is unimodal in p, so the bracket around the best node holds the maximum.
  double a = best > 0 ? grid_p(best - 1) : 1e-9;
  double b = grid_p(best + 1) < 1.0 ? grid_p(best + 1) : 1.0 - 1e-12;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = rate(x1);
  double f2 = rate(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = rate(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = rate(x1);
    }
  }
  double p_opt = 0.5 * (a + b);
  double r_opt = rate(p_opt);
  if (best_rate > r_opt) {
    p_opt = grid_p(best);
    r_opt = best_rate;
  }
  return {std::max(0.0, r_opt), p_opt};
}

}  // namespace prbqkd
