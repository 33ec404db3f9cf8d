#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "prbqkd/eavesdrop.hpp"
#include "prbqkd/legendre.hpp"
#include "prbqkd/rng.hpp"

namespace prbqkd {

struct ProtocolParams {
  LegendrePrime prime;
  RegisterKeySet keys;
  std::uint64_t pulses = 1;        // N, at most L
  double reception_rate = 1.0;     // N_r / N, in (0, 1]
  double intrinsic_error = 0.0;    // bit-flip probability on Bob's outcome, in [0, 0.5]
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// State angle φ + xπ/2: basis + x·M on the 2M grid. basis must be < M.
[[nodiscard]] AngleIndex prepare_pulse(AngleIndex basis, int x, std::uint32_t basis_count);

/// Outcome of measuring `state` in {|basis⟩, |basis+π/2⟩}: 0 with probability
/// cos²(π(state - basis)/(2M)). `u` is one uniform draw in [0, 1).
[[nodiscard]] int measure(AngleIndex state, AngleIndex basis, std::uint32_t basis_count, double u);
[[nodiscard]] int measure(AngleIndex state, AngleIndex basis, std::uint32_t basis_count,
                          RandomStream& rng);

struct EveRecord {
  AngleIndex beta;
  int z = 0;
};

struct PulseRecord {
  int x = 0;
  bool received = false;
  std::optional<int> y;
  std::optional<EveRecord> eve;

  /// c = x ⊕ y, defined only for received pulses.
  [[nodiscard]] std::optional<int> error() const {
    if (!y) return std::nullopt;
    return x ^ *y;
  }
};

struct SessionTranscript {
  std::uint32_t basis_count = 2;
  std::vector<PulseRecord> pulses;

  [[nodiscard]] std::uint64_t received_count() const;
  [[nodiscard]] std::uint64_t intercepted_count() const;
};

/// Simulates one session. Eve (if any) acts before the lossy section; losses
/// and intrinsic bit flips are applied independently afterwards. Each role
/// draws from its own stream keyed by rng_seed, indexed by pulse.
[[nodiscard]] SessionTranscript run_session(const ProtocolParams& params,
                                            const std::optional<EveStrategy>& eve = std::nullopt);
[[nodiscard]] SessionTranscript run_session(const ProtocolParams& params, const EvePlan& plan);

/// Mismatches over received pulses; EmptyTranscriptError if none was received.
[[nodiscard]] double transcript_qber(const SessionTranscript& transcript);

/// CSV export: `i,x,received,y,intercepted,beta_idx,z` with empty cells for
/// absent values.
void write_transcript_csv(const SessionTranscript& transcript, std::ostream& out);

}  // namespace prbqkd
