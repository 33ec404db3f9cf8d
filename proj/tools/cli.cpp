#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

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

#ifndef PRBQKD_VERSION
#define PRBQKD_VERSION "0.0.0"
#endif

namespace prbqkd::cli {

namespace {

constexpr std::uint64_t kPaperPrime = 9'999'999'967;  // 10^10 - 33

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) s += fmt(values[i]);
    else s += std::to_string(values[i]);
  }
  return s;
}

struct Table {
  std::string command;
  KeyValues params;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  KeyValues summary;
};

struct Common {
  std::string format = "csv";
  std::string out;
};

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return "";
        else if constexpr (std::is_same_v<V, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<V, double>) return fmt(v);
        else return v;
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
        else return v;
      },
      c);
}

void write_csv(const Table& t, std::ostream& os) {
  os << "# prbqkd " << PRBQKD_VERSION << ' ' << t.command;
  for (const auto& [k, v] : t.params) os << ' ' << k << '=' << v;
  os << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  if (!t.summary.empty()) {
    os << "# summary";
    for (const auto& [k, v] : t.summary) os << ' ' << k << '=' << v;
    os << '\n';
  }
}

void write_json(const Table& t, std::ostream& os) {
  nlohmann::ordered_json j;
  j["artifact"] = "prbqkd";
  j["version"] = PRBQKD_VERSION;
  j["command"] = t.command;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.params) j["parameters"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
    j["rows"].push_back(std::move(r));
  }
  if (!t.summary.empty()) {
    j["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.summary) j["summary"][k] = v;
  }
  os << j.dump(2) << '\n';
}

void emit(const Table& t, const Common& common, std::ostream& out) {
  std::ostringstream buffer;
  if (common.format == "json") write_json(t, buffer);
  else write_csv(t, buffer);
  if (common.out.empty()) {
    out << buffer.str();
    return;
  }
  std::ofstream file(common.out, std::ios::binary);
  if (!file) throw ParameterError("cannot open output file '" + common.out + "'");
  file << buffer.str();
  if (!file) throw ParameterError("failed writing output file '" + common.out + "'");
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "Output file (default: stdout)");
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw ParameterError("grid needs step > 0 and max >= min");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

// ---------------------------------------------------------------- zeta

struct ZetaArgs {
  int mmin = 2;
  int mmax = 12;
};

Table run_zeta(const ZetaArgs& a) {
  if (a.mmin < 1 || a.mmax > 24 || a.mmin > a.mmax) throw ParameterError("need 1 <= mmin <= mmax <= 24");
  Table t;
  t.command = "zeta";
  t.params = {{"mmin", std::to_string(a.mmin)}, {"mmax", std::to_string(a.mmax)}};
  t.columns = {"M", "zeta"};
  for (int m = a.mmin; m <= a.mmax; ++m) {
    const std::uint64_t M = std::uint64_t{1} << m;
    t.rows.push_back({static_cast<std::int64_t>(M), zeta(M)});
  }
  return t;
}

// ---------------------------------------------------------------- rates

struct RatesArgs {
  std::vector<double> q;
  double qmin = 0.0;
  double qmax = 0.25;
  double qstep = 0.005;
  std::vector<double> f{1.0, 1.22};
  std::uint64_t L = kPaperPrime;
  std::uint64_t N = 0;  // 0 means N = L
  int m = 10;
  double eps = 1e-6;
  int s = 12;
  int S = 0;  // 0 means round(eps L / m)
  double loss_ratio = 0.001;
  std::string bound = "corollary2_lp";
};

Table run_rates(const RatesArgs& a) {
  const LegendrePrime prime(a.L);
  const double N = static_cast<double>(a.N == 0 ? a.L : a.N);
  if (N > static_cast<double>(a.L)) throw ParameterError("N must not exceed L");
  if (!(a.loss_ratio > 0.0 && a.loss_ratio <= 1.0)) throw ParameterError("loss ratio must lie in (0, 1]");
  for (double f : a.f) {
    if (!(f >= 1.0)) throw ParameterError("efficiency f must be >= 1");
  }
  const std::vector<double> qs = a.q.empty() ? linear_grid(a.qmin, a.qmax, a.qstep) : a.q;
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 0.5)) throw ParameterError("QBER grid values must lie in [0, 0.5]");
  }

  RateModelConfig cfg;
  cfg.register_count = a.m;
  cfg.epsilon = a.eps;
  cfg.L = static_cast<double>(a.L);
  cfg.s_pattern = a.s;
  if (a.S > 0) cfg.S_keys = a.S;
  cfg.bound_source = bound_source_from_string(a.bound);
  const RateModel model(cfg);

  // I_E(q) does not depend on f, so it is computed once per grid point.
  const auto eve_info = parallel_map(qs.size(), [&](std::size_t i) -> std::optional<double> {
    try {
      return model.eve_info(qs[i]);
    } catch (const QberUnachievableError&) {
      return std::nullopt;
    }
  });

  Table t;
  t.command = "rates";
  t.params = {{"q", join(qs)},
              {"f", join(a.f)},
              {"L", std::to_string(a.L)},
              {"N", fmt(N)},
              {"m", std::to_string(a.m)},
              {"eps", fmt(a.eps)},
              {"s", std::to_string(a.s)},
              {"S", std::to_string(model.config().key_subset_size())},
              {"loss_ratio", fmt(a.loss_ratio)},
              {"bound", a.bound},
              {"q_max", fmt(model.max_qber())}};
  t.columns = {"q", "protocol", "f", "channel", "R", "p_opt"};

  const std::vector<std::pair<std::string, double>> channels{{"lossless", N}, {"lossy", N * a.loss_ratio}};
  for (double f : a.f) {
    for (const auto& [channel, N_r] : channels) {
      for (std::size_t i = 0; i < qs.size(); ++i) {
        const double R = eve_info[i] ? std::max(0.0, 1.0 - f * binary_entropy(qs[i]) - *eve_info[i]) : 0.0;
        t.rows.push_back({qs[i], std::string("PRB"), f, channel, R, std::monostate{}});
      }
      for (double q : qs) t.rows.push_back({q, std::string("BB84"), f, channel, rate_bb84(q, f), std::monostate{}});
      const auto abb = parallel_map(qs.size(), [&, N_r = N_r](std::size_t i) {
        return rate_abb84(qs[i], f, N_r, a.eps);
      });
      for (std::size_t i = 0; i < qs.size(); ++i) {
        // No positive rate means no meaningful optimizer.
        const Cell p_opt = abb[i].R > 0.0 ? Cell{abb[i].p_opt} : Cell{};
        t.rows.push_back({qs[i], std::string("aBB84"), f, channel, abb[i].R, p_opt});
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::uint64_t L = kPaperPrime;
  int s = 12;
  int S = 1000;
  int cor1_S = 0;  // 0 means s
  std::vector<double> gamma;
};

Table run_bounds(const BoundsArgs& a) {
  std::vector<double> gammas = a.gamma;
  if (gammas.empty()) {
    for (int k = 1; k <= 20; ++k) gammas.push_back(0.05 * k);
  }
  const int cor1_S = a.cor1_S > 0 ? a.cor1_S : a.s;
  const double L = static_cast<double>(a.L);
  const Corollary2Program program(a.s, a.S);
  struct Row {
    double d1, d2;
  };
  const auto rows = parallel_map(gammas.size(), [&](std::size_t i) {
    const double g = gammas[i];
    const double c1 = bound_corollary1(L, g, a.s, cor1_S);
    const auto problem = GuessBoundProblem::from_formula(L, g, a.s, a.S);
    const double c2 = program.solve(problem.gamma_prime).nu_correct * problem.Lprime;
    return Row{c1 / (g * L) - 0.5, c2 / (g * L) - 0.5};
  });

  Table t;
  t.command = "bounds";
  t.params = {{"L", std::to_string(a.L)},
              {"s", std::to_string(a.s)},
              {"S", std::to_string(a.S)},
              {"cor1_S", std::to_string(cor1_S)},
              {"gamma", join(gammas)},
              {"eps_thm1", fmt(cor1_S / L)},
              {"eps_cor", fmt(a.S / L)}};
  t.columns = {"gamma", "delta_cor1", "delta_cor2"};
  for (std::size_t i = 0; i < gammas.size(); ++i) t.rows.push_back({gammas[i], rows[i].d1, rows[i].d2});
  return t;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::uint64_t L = 1019;
  int m = 1;
  std::uint64_t N = 0;
  double gamma = 1.0;
  std::string strategy;
  int trials = 50;
  double reception = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> keys;
  std::string transcript;
};

EveStrategy parse_strategy(const std::string& text, double gamma) {
  if (text.empty()) return EveStrategy{gamma, UniformGuess{}};
  if (text.front() == '{') return strategy_from_json(text);
  std::ifstream file(text);
  if (!file) throw ParameterError("cannot read strategy file '" + text + "'");
  std::stringstream ss;
  ss << file.rdbuf();
  return strategy_from_json(ss.str());
}

struct TrialResult {
  double empirical = 0.0;
  double analytic = 0.0;
  SessionTranscript transcript;
};

Table run_simulate(const SimulateArgs& a) {
  LegendrePrime prime(a.L);
  prime.build_table();
  const std::uint64_t N = a.N == 0 ? a.L : a.N;
  if (a.trials < 1) throw ParameterError("trials must be >= 1");
  if (a.m < 1 || a.m > 20) throw ParameterError("register count m must lie in [1, 20]");
  if (!a.keys.empty() && static_cast<int>(a.keys.size()) != a.m)
    throw ParameterError("--keys needs exactly m values");
  const EveStrategy strategy = parse_strategy(a.strategy, a.gamma);
  strategy.validate(a.m, prime, N);
  const std::uint32_t M = 1u << a.m;
  const CounterRng root(a.seed);

  const auto trials = parallel_map(static_cast<std::size_t>(a.trials), [&](std::size_t trial) {
    const std::uint64_t trial_seed = root.split(trial).bits(0);
    std::vector<std::uint64_t> keys = a.keys;
    if (keys.empty()) {
      RandomStream key_rng(role_stream(CounterRng(trial_seed), Role::Keys));
      for (int r = 0; r < a.m; ++r) keys.push_back(key_rng.below(a.L));
    }
    ProtocolParams params{prime, RegisterKeySet(keys, prime), N, a.reception, a.noise, trial_seed};
    TrialResult res;
    res.transcript = run_session(params, strategy);
    res.empirical = transcript_qber(res.transcript);

    // Expected QBER given Eve's plan and which pulses arrived.
    double expected = 0.0;
    std::uint64_t received = 0;
    for (std::uint64_t i = 0; i < N; ++i) {
      const auto& p = res.transcript.pulses[i];
      if (!p.received) continue;
      ++received;
      double e = 0.0;
      if (p.eve) {
        const AngleIndex phi = basis_angle_index(static_cast<std::int64_t>(i), params.keys, prime);
        const std::uint32_t delta = (p.eve->beta.value + 2 * M - phi.value) % (2 * M);
        e = intercept_error_prob(AngleIndex{delta}, M);
      }
      expected += a.noise + (1.0 - 2.0 * a.noise) * e;
    }
    res.analytic = expected / static_cast<double>(received);
    if (trial != 0) res.transcript.pulses.clear();
    return res;
  });

  if (!a.transcript.empty()) {
    std::ofstream file(a.transcript, std::ios::binary);
    if (!file) throw ParameterError("cannot open transcript file '" + a.transcript + "'");
    write_transcript_csv(trials.front().transcript, file);
  }

  Table t;
  t.command = "simulate";
  t.params = {{"L", std::to_string(a.L)},
              {"m", std::to_string(a.m)},
              {"N", std::to_string(N)},
              {"strategy", strategy_to_json(strategy)},
              {"trials", std::to_string(a.trials)},
              {"reception", fmt(a.reception)},
              {"noise", fmt(a.noise)},
              {"seed", std::to_string(a.seed)},
              {"keys", a.keys.empty() ? std::string("random") : join(a.keys)}};
  t.columns = {"trial", "qber_empirical", "qber_analytic"};
  double sum = 0.0;
  double sum_analytic = 0.0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    t.rows.push_back({static_cast<std::int64_t>(i), trials[i].empirical, trials[i].analytic});
    sum += trials[i].empirical;
    sum_analytic += trials[i].analytic;
  }
  const double n = static_cast<double>(trials.size());
  const double mean = sum / n;
  double var = 0.0;
  for (const auto& tr : trials) var += (tr.empirical - mean) * (tr.empirical - mean);
  const double sigma_mean = trials.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  t.summary = {{"mean_qber_empirical", fmt(mean)},
               {"mean_qber_analytic", fmt(sum_analytic / n)},
               {"sigma_mean", fmt(sigma_mean)}};
  if (std::holds_alternative<UniformGuess>(strategy.mode)) {
    const double gamma_eff = static_cast<double>(intercept_count(strategy.gamma, N)) / static_cast<double>(N);
    const double model = qber_from_gamma(gamma_eff, delta_distribution(0.5, a.m));
    t.summary.emplace_back("model_qber", fmt(a.noise + (1.0 - 2.0 * a.noise) * model));
  }
  return t;
}

// ---------------------------------------------------------------- seed-guess

struct SeedGuessArgs {
  std::uint64_t L = 103;
  int m = 1;
  std::vector<std::uint64_t> n{0, 2, 4, 6, 8, 10, 12, 14, 16};
  int trials = 100;
  std::uint64_t seed = 0;
};

Table run_seed_guess(const SeedGuessArgs& a) {
  LegendrePrime prime(a.L);
  prime.build_table();
  if (a.trials < 1) throw ParameterError("trials must be >= 1");
  if (a.m < 1 || a.m > 16) throw ParameterError("register count m must lie in [1, 16]");
  if (std::pow(static_cast<double>(a.L), a.m + 1) > kSeedEnumerationLimit)
    throw EnumerationLimitError("seed enumeration L^(m+1) exceeds 1e7");
  const double l = (a.m + 1) * std::log2(static_cast<double>(a.L));
  const CounterRng root(a.seed);

  Table t;
  t.command = "seed-guess";
  t.params = {{"L", std::to_string(a.L)},   {"m", std::to_string(a.m)},
              {"n", join(a.n)},             {"trials", std::to_string(a.trials)},
              {"seed", std::to_string(a.seed)}, {"l", fmt(l)}};
  t.columns = {"n", "empirical_success", "bound"};
  for (std::size_t ni = 0; ni < a.n.size(); ++ni) {
    const std::uint64_t n = a.n[ni];
    if (n > a.L) throw ParameterError("n must not exceed L");
    struct Outcome {
      bool success = false;
      double bound = 0.0;
    };
    const auto outcomes = parallel_map(static_cast<std::size_t>(a.trials), [&](std::size_t trial) {
      RandomStream rng(root.split(ni).split(trial));
      std::vector<std::uint64_t> keys(static_cast<std::size_t>(a.m) + 1);
      for (auto& k : keys) k = rng.below(a.L);
      std::vector<std::uint64_t> order(a.L);
      std::iota(order.begin(), order.end(), std::uint64_t{0});
      for (std::uint64_t i = 0; i < n; ++i) std::swap(order[i], order[i + rng.below(a.L - i)]);
      order.resize(n);
      const auto obs = simulate_observations(keys, prime, order, rng);
      const auto estimate = ml_seed_estimate(obs, prime, a.m);
      std::uint64_t n0 = 0;
      for (const auto& o : obs) n0 += o.e.c == 0 ? 1 : 0;
      return Outcome{estimate.keys == keys, guess_probability_bound(l, n0, n - n0)};
    });
    double successes = 0.0;
    double bound = 0.0;
    for (const auto& o : outcomes) {
      successes += o.success ? 1.0 : 0.0;
      bound += o.bound;
    }
    t.rows.push_back({static_cast<std::int64_t>(n), successes / a.trials, bound / a.trials});
  }
  t.summary = {{"interceptions_needed", fmt(interceptions_needed(l))}};
  return t;
}

// ---------------------------------------------------------------- pns

struct PnsArgs {
  std::vector<double> l{8, 16, 32};
  std::vector<double> n;
};

Table run_pns(const PnsArgs& a) {
  std::vector<double> ns = a.n;
  if (ns.empty()) ns = linear_grid(0, 128, 8);
  Table t;
  t.command = "pns";
  t.params = {{"l", join(a.l)}, {"n", join(ns)}};
  t.columns = {"l", "n", "p_succ_bound"};
  for (double l : a.l) {
    for (double n : ns) t.rows.push_back({l, n, succ_prob_lower_bound(l, n)});
  }
  return t;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudorandom-bases QKD: simulation and security analysis", "prbqkd"};
  app.set_version_flag("--version", PRBQKD_VERSION);
  app.set_config("--config", "", "TOML file mirroring the command-line flags");
  app.require_subcommand(1, 1);

  Common common;

  ZetaArgs zeta_args;
  auto* zeta_cmd = app.add_subcommand("zeta", "zeta(M) for M = 2^mmin .. 2^mmax");
  zeta_cmd->add_option("--mmin", zeta_args.mmin, "Smallest register count");
  zeta_cmd->add_option("--mmax", zeta_args.mmax, "Largest register count");
  add_common(zeta_cmd, common);

  RatesArgs rates_args;
  auto* rates_cmd = app.add_subcommand("rates", "Secret fractions of PRB, BB84 and aBB84 over a QBER grid");
  rates_cmd->add_option("--q", rates_args.q, "Explicit QBER values (overrides the grid)")->delimiter(',');
  rates_cmd->add_option("--qmin", rates_args.qmin, "Grid start");
  rates_cmd->add_option("--qmax", rates_args.qmax, "Grid end");
  rates_cmd->add_option("--qstep", rates_args.qstep, "Grid step");
  rates_cmd->add_option("--f", rates_args.f, "Error-correction efficiencies")->delimiter(',');
  rates_cmd->add_option("--L", rates_args.L, "Legendre prime");
  rates_cmd->add_option("--N", rates_args.N, "Pulses sent (default L)");
  rates_cmd->add_option("--m", rates_args.m, "Register count");
  rates_cmd->add_option("--eps", rates_args.eps, "Failure probability");
  rates_cmd->add_option("--s", rates_args.s, "Pattern order");
  rates_cmd->add_option("--S", rates_args.S, "Key subset size (default round(eps L / m))");
  rates_cmd->add_option("--loss-ratio", rates_args.loss_ratio, "N_r / N on the lossy channel");
  rates_cmd->add_option("--bound", rates_args.bound, "Source of Eve's guessing bound")
      ->check(CLI::IsMember({"truly_random", "theorem1", "corollary1", "corollary2_lp"}));
  add_common(rates_cmd, common);

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "Guessing-bound excess delta(gamma), closed form vs LP");
  bounds_cmd->add_option("--L", bounds_args.L, "Legendre prime");
  bounds_cmd->add_option("--s", bounds_args.s, "Pattern order");
  bounds_cmd->add_option("--S", bounds_args.S, "Key subset size for the LP");
  bounds_cmd->add_option("--cor1-S", bounds_args.cor1_S, "Key subset size for the closed form (default s)");
  bounds_cmd->add_option("--gamma", bounds_args.gamma, "Intercept fractions")->delimiter(',');
  add_common(bounds_cmd, common);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo intercept-resend sessions");
  sim_cmd->add_option("--L", sim_args.L, "Legendre prime");
  sim_cmd->add_option("--m", sim_args.m, "Register count");
  sim_cmd->add_option("--N", sim_args.N, "Pulses per session (default L)");
  sim_cmd->add_option("--gamma", sim_args.gamma, "Intercept fraction for the default uniform strategy");
  sim_cmd->add_option("--strategy", sim_args.strategy, "Strategy JSON, inline or as a file path");
  sim_cmd->add_option("--trials", sim_args.trials, "Number of sessions");
  sim_cmd->add_option("--reception", sim_args.reception, "Reception rate N_r / N");
  sim_cmd->add_option("--noise", sim_args.noise, "Intrinsic bit-flip probability");
  sim_cmd->add_option("--seed", sim_args.seed, "Root seed");
  sim_cmd->add_option("--keys", sim_args.keys, "Fixed register keys (default random per trial)")->delimiter(',');
  sim_cmd->add_option("--transcript", sim_args.transcript, "Write trial 0's transcript CSV here");
  add_common(sim_cmd, common);

  SeedGuessArgs seed_args;
  auto* seed_cmd = app.add_subcommand("seed-guess", "Maximum-likelihood seed recovery experiment");
  seed_cmd->add_option("--L", seed_args.L, "Legendre prime");
  seed_cmd->add_option("--m", seed_args.m, "Register count (m + 1 seeds on the extended grid)");
  seed_cmd->add_option("--n", seed_args.n, "Intercepted position counts")->delimiter(',');
  seed_cmd->add_option("--trials", seed_args.trials, "Trials per n");
  seed_cmd->add_option("--seed", seed_args.seed, "Root seed");
  add_common(seed_cmd, common);

  PnsArgs pns_args;
  auto* pns_cmd = app.add_subcommand("pns", "Photon-number-splitting success-probability bound");
  pns_cmd->add_option("--l", pns_args.l, "Seed lengths in bits")->delimiter(',');
  pns_cmd->add_option("--n", pns_args.n, "Multiphoton pulse counts")->delimiter(',');
  add_common(pns_cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Table table;
    if (zeta_cmd->parsed()) table = run_zeta(zeta_args);
    else if (rates_cmd->parsed()) table = run_rates(rates_args);
    else if (bounds_cmd->parsed()) table = run_bounds(bounds_args);
    else if (sim_cmd->parsed()) table = run_simulate(sim_args);
    else if (seed_cmd->parsed()) table = run_seed_guess(seed_args);
    else table = run_pns(pns_args);
    emit(table, common, out);
  } catch (const ParameterError& e) {
    err << "prbqkd: parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "prbqkd: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const EmptyTranscriptError& e) {
    err << "prbqkd: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace prbqkd::cli
