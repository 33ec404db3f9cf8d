#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prbqkd/legendre.hpp"

namespace prbqkd {

class Corollary2Program;

/// -p log2 p - (1-p) log2(1-p), with 0·log 0 = 0.
[[nodiscard]] double binary_entropy(double p);

/// Error probability ½ sin²(2Δ) when Eve measures at angle offset Δ.
[[nodiscard]] double intercept_error_prob(double delta_radians);
[[nodiscard]] double intercept_error_prob(AngleIndex delta, std::uint32_t basis_count);

/// p_t = ρ^{#0(t)} (1-ρ)^{#1(t)} over the m-digit binary expansion of t.
[[nodiscard]] std::vector<double> delta_distribution(double rho_correct, int register_count);

/// q = (γ/4) Σ_t p_t [1 - cos(2πt/M)], M = p_t.size().
[[nodiscard]] double qber_from_gamma(double gamma, std::span<const double> p_t);

/// 1 - (1/M) Σ_j h(cos²(πj/(2M))); M must be a power of two >= 2.
[[nodiscard]] double zeta(std::uint64_t basis_count);

enum class BoundSource { TrulyRandom, Theorem1, Corollary1, Corollary2LP };

[[nodiscard]] std::string_view to_string(BoundSource source);
[[nodiscard]] BoundSource bound_source_from_string(std::string_view name);

struct RateModelConfig {
  double f = 1.0;  // error-correction efficiency
  std::function<double(double)> f_of_q;  // overrides f when set
  int register_count = 10;
  double epsilon = 1e-6;
  double N_r = 1e7;
  BoundSource bound_source = BoundSource::Corollary2LP;
  double L = 9'999'999'967.0;
  int s_pattern = 12;
  std::optional<int> S_keys;  // defaults to round(ε L / m)

  [[nodiscard]] int key_subset_size() const;
  [[nodiscard]] double efficiency(double q) const { return f_of_q ? f_of_q(q) : f; }
};

/// PRB intercept-resend rate model for one bound source. Eve's per-register
/// correct-guess fraction ρ(γ) comes from the configured bound.
class RateModel {
 public:
  explicit RateModel(RateModelConfig config);
  ~RateModel();
  RateModel(RateModel&&) noexcept;
  RateModel& operator=(RateModel&&) noexcept;

  [[nodiscard]] const RateModelConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::uint32_t basis_count() const noexcept { return 1u << config_.register_count; }

  /// Correct-guess fraction per register, clamped to [1/2, 1].
  [[nodiscard]] double rho(double gamma) const;
  [[nodiscard]] double qber(double gamma) const;
  /// q(1); larger QBERs cannot come from intercept-resend alone.
  [[nodiscard]] double max_qber() const noexcept { return q_max_; }
  /// Inverse of qber(γ) by bisection; QberUnachievableError above max_qber().
  [[nodiscard]] double gamma_from_qber(double q) const;
  [[nodiscard]] double eve_info(double q) const;
  [[nodiscard]] double rate_prb(double q) const;

 private:
  RateModelConfig config_;
  int S_keys_;
  std::vector<double> h_cos2_;
  std::unique_ptr<Corollary2Program> lp_;
  double q_max_ = 0.0;
};

/// max(0, 1 - f h(q) - 4 q ζ(M)), Eve guessing bases at random.
[[nodiscard]] double rate_prb_asymptotic(double q, double f, std::uint64_t basis_count);

/// max(0, ½[1 - f h(q) - 2q]).
[[nodiscard]] double rate_bb84(double q, double f);

/// √(ln(1/ε) / (2K)).
[[nodiscard]] double hoeffding_delta(double trials, double epsilon);

/// Unclamped (1-p)²[1 - f h(q) - 2(q + δ(p² N_r, ε))].
[[nodiscard]] double abb84_rate_at(double p, double q, double f, double N_r, double epsilon);

struct Abb84Rate {
  double R = 0.0;
  double p_opt = 0.0;
};

/// Maximizes abb84_rate_at over p: 512-point log grid on [1e-6, 1), then
/// golden-section refinement to 1e-10. R is clamped at 0.
[[nodiscard]] Abb84Rate rate_abb84(double q, double f, double N_r, double epsilon);

}  // namespace prbqkd
