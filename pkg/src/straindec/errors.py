"""Exception types shared across the package."""

from __future__ import annotations


class StrainDecError(Exception):
    """Base class for every error raised by this package."""


class ConditioningError(StrainDecError):
    """A metric or frame is too close to degenerate for verdicts to mean anything."""


class DomainError(StrainDecError):
    """An invariant vector lies outside the domain of a Lagrangian.

    Carries the offending vector so callers can log or fixture it.
    """

    def __init__(self, message: str, vector=None):
        super().__init__(message)
        self.vector = vector


class StepError(StrainDecError):
    """Finite differencing could not find a usable step after retries."""


class ConfigError(StrainDecError):
    """A config, report, or fixture file is malformed or inconsistent."""


class SamplerStarvationError(ConfigError):
    """A rejection sampler ran out of tries before filling its quota.

    ``acceptance_rate`` is the fraction of draws that landed in the domain
    before the sampler gave up (0.0 if nothing was ever accepted).
    """

    def __init__(self, message: str, acceptance_rate: float = 0.0):
        super().__init__(message)
        self.acceptance_rate = float(acceptance_rate)
