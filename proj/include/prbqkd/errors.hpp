#pragma once

#include <stdexcept>
#include <string>

namespace prbqkd {

/// Invalid input: bad prime, key out of range, malformed strategy, etc.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A brute-force routine was asked to enumerate more than its cap allows.
class EnumerationLimitError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// The pattern-deviation correction is at least as large as the period,
/// so the Corollary-style bound carries no information.
class DeviationDominatesPeriodError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A transcript with no received pulses has no defined QBER.
class EmptyTranscriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical routine failed a self-check (non-monotone inversion, LP
/// non-convergence, infeasibility that should be impossible).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measured QBER exceeds what a full intercept-resend attack produces; the
/// protocol aborts in this regime.
class QberUnachievableError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace prbqkd
