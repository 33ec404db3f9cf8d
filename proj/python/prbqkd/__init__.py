"""Pseudorandom-bases QKD: simulation and security analysis."""

from ._core import (
    DeviationDominatesPeriodError,
    EmptyTranscriptError,
    EnumerationLimitError,
    NumericError,
    ParameterError,
    QberUnachievableError,
    __version__,
    binary_entropy,
    binomial_cdf,
    bound_corollary1,
    bound_corollary2_lp,
    bound_theorem1,
    bruteforce_minmax,
    discrimination_bound_exact,
    find_r,
    guess_probability_bound,
    interceptions_needed,
    is_prime,
    legendre_bit,
    observation_likelihood,
    pattern_count,
    pattern_deviation_bound,
    prng_bit,
    rate_abb84,
    rate_bb84,
    rate_prb,
    rate_prb_asymptotic,
    run_cli,
    simulate_session,
    succ_prob_lower_bound,
    zeta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
