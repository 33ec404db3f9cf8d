#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "prbqkd/analytics.hpp"
#include "prbqkd/bounds.hpp"
#include "prbqkd/eavesdrop.hpp"
#include "prbqkd/errors.hpp"
#include "prbqkd/legendre.hpp"
#include "prbqkd/pns.hpp"
#include "prbqkd/protocol.hpp"
#include "prbqkd/seedguess.hpp"

namespace py = pybind11;
using namespace prbqkd;

namespace {

py::dict session_summary(std::uint64_t L, std::vector<std::uint64_t> keys, std::uint64_t pulses, double reception,
                         double intrinsic, std::uint64_t seed, std::optional<std::string> strategy_json) {
  const LegendrePrime prime(L);
  ProtocolParams params{prime, RegisterKeySet(std::move(keys), prime), pulses, reception, intrinsic, seed};
  std::optional<EveStrategy> eve;
  if (strategy_json) eve = strategy_from_json(*strategy_json);
  const auto transcript = run_session(params, eve);
  py::dict out;
  out["received"] = transcript.received_count();
  out["intercepted"] = transcript.intercepted_count();
  out["qber"] = transcript.received_count() > 0 ? py::cast(transcript_qber(transcript)) : py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Pseudorandom-bases QKD core";
  mod.attr("__version__") = PRBQKD_VERSION;

  auto parameter_error = py::register_exception<ParameterError>(mod, "ParameterError", PyExc_ValueError);
  py::register_exception<EnumerationLimitError>(mod, "EnumerationLimitError", parameter_error.ptr());
  py::register_exception<DeviationDominatesPeriodError>(mod, "DeviationDominatesPeriodError", parameter_error.ptr());
  py::register_exception<EmptyTranscriptError>(mod, "EmptyTranscriptError", PyExc_RuntimeError);
  auto numeric_error = py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);
  py::register_exception<QberUnachievableError>(mod, "QberUnachievableError", numeric_error.ptr());

  mod.def("is_prime", &is_prime_u64, py::arg("n"));
  mod.def(
      "legendre_bit", [](std::int64_t i, std::uint64_t L) { return legendre_bit(i, LegendrePrime(L)); },
      py::arg("i"), py::arg("L"));
  mod.def(
      "prng_bit", [](std::int64_t i, std::uint64_t k, std::uint64_t L) { return prng_bit(i, k, LegendrePrime(L)); },
      py::arg("i"), py::arg("k"), py::arg("L"));
  mod.def(
      "pattern_count",
      [](const std::vector<std::int64_t>& offsets, const std::vector<int>& bits, std::uint64_t L) {
        return pattern_count(offsets, bits, LegendrePrime(L));
      },
      py::arg("offsets"), py::arg("bits"), py::arg("L"));
  mod.def("pattern_deviation_bound", &pattern_deviation_bound, py::arg("s"), py::arg("L"));

  mod.def("binary_entropy", &binary_entropy, py::arg("p"));
  mod.def("zeta", &zeta, py::arg("M"));
  mod.def("rate_bb84", &rate_bb84, py::arg("q"), py::arg("f") = 1.0);
  mod.def("rate_prb_asymptotic", &rate_prb_asymptotic, py::arg("q"), py::arg("f") = 1.0, py::arg("M") = 1024);
  mod.def(
      "rate_abb84",
      [](double q, double f, double N_r, double epsilon) {
        const auto r = rate_abb84(q, f, N_r, epsilon);
        return py::make_tuple(r.R, r.p_opt);
      },
      py::arg("q"), py::arg("f") = 1.0, py::arg("N_r") = 1e7, py::arg("epsilon") = 1e-6);
  mod.def(
      "rate_prb",
      [](double q, double f, int m, double epsilon, double N_r, const std::string& bound, double L, int s_pattern,
         std::optional<int> S_keys) {
        RateModelConfig cfg;
        cfg.f = f;
        cfg.register_count = m;
        cfg.epsilon = epsilon;
        cfg.N_r = N_r;
        cfg.bound_source = bound_source_from_string(bound);
        cfg.L = L;
        cfg.s_pattern = s_pattern;
        cfg.S_keys = S_keys;
        return RateModel(std::move(cfg)).rate_prb(q);
      },
      py::arg("q"), py::arg("f") = 1.0, py::arg("m") = 10, py::arg("epsilon") = 1e-6, py::arg("N_r") = 1e7,
      py::arg("bound") = "corollary2_lp", py::arg("L") = 9'999'999'967.0, py::arg("s_pattern") = 12,
      py::arg("S_keys") = std::nullopt);

  mod.def("binomial_cdf", &binomial_cdf, py::arg("s"), py::arg("t"));
  mod.def("find_r", py::overload_cast<int, double>(&find_r), py::arg("s"), py::arg("gamma"));
  mod.def("bound_theorem1", &bound_theorem1, py::arg("L"), py::arg("gamma"), py::arg("s"));
  mod.def("bound_corollary1", py::overload_cast<double, double, int, int>(&bound_corollary1), py::arg("L"),
          py::arg("gamma"), py::arg("s_pattern"), py::arg("S_keys"));
  mod.def(
      "bound_corollary2_lp",
      [](double L, double gamma, int s_pattern, int S_keys) {
        return bound_corollary2_lp(L, gamma, s_pattern, S_keys).value;
      },
      py::arg("L"), py::arg("gamma"), py::arg("s_pattern"), py::arg("S_keys"));
  mod.def(
      "bruteforce_minmax",
      [](std::uint64_t L, const std::vector<std::uint64_t>& keys) { return bruteforce_minmax(LegendrePrime(L), keys); },
      py::arg("L"), py::arg("keys"));

  mod.def("succ_prob_lower_bound", &succ_prob_lower_bound, py::arg("l"), py::arg("n"));
  mod.def(
      "discrimination_bound_exact",
      [](std::uint64_t L, const std::vector<std::uint64_t>& positions) {
        return discrimination_bound_exact(LegendrePrime(L), positions);
      },
      py::arg("L"), py::arg("positions"));

  mod.def(
      "observation_likelihood",
      [](int x, int z, int c, std::uint32_t beta, std::uint32_t phi, std::uint32_t M) {
        return observation_likelihood({x, z, c, AngleIndex{beta}}, AngleIndex{phi}, M);
      },
      py::arg("x"), py::arg("z"), py::arg("c"), py::arg("beta"), py::arg("phi"), py::arg("M"));
  mod.def("guess_probability_bound", &guess_probability_bound, py::arg("l"), py::arg("n0"), py::arg("n1"));
  mod.def("interceptions_needed", &interceptions_needed, py::arg("l"));

  mod.def("simulate_session", &session_summary, py::arg("L"), py::arg("keys"), py::arg("pulses"),
          py::arg("reception") = 1.0, py::arg("intrinsic_error") = 0.0, py::arg("seed") = 0,
          py::arg("strategy") = std::nullopt);

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
