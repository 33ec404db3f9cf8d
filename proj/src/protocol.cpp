#include "prbqkd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "prbqkd/errors.hpp"

namespace prbqkd {

void ProtocolParams::validate() const {
  if (pulses == 0) throw ParameterError("pulse count N must be >= 1");
  if (pulses > prime.value()) throw ParameterError("pulse count N must not exceed L");
  if (!(reception_rate > 0.0 && reception_rate <= 1.0))
    throw ParameterError("reception rate must lie in (0, 1]");
  if (!(intrinsic_error >= 0.0 && intrinsic_error <= 0.5))
    throw ParameterError("intrinsic error must lie in [0, 0.5]");
}

AngleIndex prepare_pulse(AngleIndex basis, int x, std::uint32_t basis_count) {
  if (basis.value >= basis_count) throw ParameterError("basis index must be below M");
  if (x != 0 && x != 1) throw ParameterError("bit must be 0 or 1");
  return AngleIndex{(basis.value + static_cast<std::uint32_t>(x) * basis_count) % (2 * basis_count)};
}

int measure(AngleIndex state, AngleIndex basis, std::uint32_t basis_count, double u) {
  const std::uint32_t grid = 2 * basis_count;
  const std::uint32_t delta = (state.value + grid - basis.value % grid) % grid;
  // Exact on the degenerate angles so aligned and orthogonal states never flip.
  if (delta == 0) return 0;
  if (delta == basis_count) return 1;
  const double c = std::cos(std::numbers::pi * delta / (2.0 * basis_count));
  return u < c * c ? 0 : 1;
}

int measure(AngleIndex state, AngleIndex basis, std::uint32_t basis_count, RandomStream& rng) {
  return measure(state, basis, basis_count, rng.uniform());
}

std::uint64_t SessionTranscript::received_count() const {
  std::uint64_t n = 0;
  for (const auto& p : pulses) n += p.received ? 1 : 0;
  return n;
}

std::uint64_t SessionTranscript::intercepted_count() const {
  std::uint64_t n = 0;
  for (const auto& p : pulses) n += p.eve ? 1 : 0;
  return n;
}

SessionTranscript run_session(const ProtocolParams& params, const std::optional<EveStrategy>& eve) {
  params.validate();
  if (!eve) return run_session(params, EvePlan{params.keys.basis_count(), {}, {}});
  const CounterRng root(params.rng_seed);
  RandomStream plan_rng(role_stream(root, Role::EvePlan));
  return run_session(params, build_eve_bases(*eve, params.keys.register_count(), params.prime,
                                             params.pulses, plan_rng));
}

SessionTranscript run_session(const ProtocolParams& params, const EvePlan& plan) {
  params.validate();
  const std::uint32_t M = params.keys.basis_count();
  if (plan.basis_count != M) throw ParameterError("Eve's plan uses a different basis count");
  if (plan.positions.size() != plan.betas.size()) throw ParameterError("malformed Eve plan");

  const CounterRng root(params.rng_seed);
  const CounterRng alice = role_stream(root, Role::AliceBits);
  const CounterRng eve_out = role_stream(root, Role::EveOutcome);
  const CounterRng bob_out = role_stream(root, Role::BobOutcome);
  const CounterRng loss = role_stream(root, Role::Loss);
  const CounterRng noise = role_stream(root, Role::Noise);

  SessionTranscript t;
  t.basis_count = M;
  t.pulses.resize(params.pulses);
  std::size_t next_eve = 0;
  for (std::uint64_t i = 0; i < params.pulses; ++i) {
    PulseRecord& rec = t.pulses[i];
    const AngleIndex basis = basis_angle_index(static_cast<std::int64_t>(i), params.keys, params.prime);
    rec.x = static_cast<int>(alice.bits(i) >> 63);
    AngleIndex state = prepare_pulse(basis, rec.x, M);

    while (next_eve < plan.positions.size() && plan.positions[next_eve] < i) ++next_eve;
    if (next_eve < plan.positions.size() && plan.positions[next_eve] == i) {
      const AngleIndex beta = plan.betas[next_eve];
      const int z = measure(state, beta, M, eve_out.uniform(i));
      rec.eve = EveRecord{beta, z};
      state = prepare_pulse(beta, z, M);
    }

    rec.received = loss.uniform(i) < params.reception_rate;
    if (!rec.received) continue;
    int y = measure(state, basis, M, bob_out.uniform(i));
    if (params.intrinsic_error > 0.0 && noise.uniform(i) < params.intrinsic_error) y ^= 1;
    rec.y = y;
  }
  return t;
}

double transcript_qber(const SessionTranscript& transcript) {
  std::uint64_t received = 0;
  std::uint64_t errors = 0;
  for (const auto& p : transcript.pulses) {
    if (!p.received) continue;
    ++received;
    errors += static_cast<std::uint64_t>(*p.error());
  }
  if (received == 0) throw EmptyTranscriptError("transcript has no received pulses");
  return static_cast<double>(errors) / static_cast<double>(received);
}

void write_transcript_csv(const SessionTranscript& transcript, std::ostream& out) {
  out << "i,x,received,y,intercepted,beta_idx,z\n";
  for (std::size_t i = 0; i < transcript.pulses.size(); ++i) {
    const auto& p = transcript.pulses[i];
    out << i << ',' << p.x << ',' << (p.received ? 1 : 0) << ',';
    if (p.y) out << *p.y;
    out << ',' << (p.eve ? 1 : 0) << ',';
    if (p.eve) out << p.eve->beta.value << ',' << p.eve->z;
    else out << ',';
    out << '\n';
  }
}

}  // namespace prbqkd
