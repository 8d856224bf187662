"""Three-point uncertainty distributions and the keyed uniform stream.

Every uncertain model input is described by a (low, mode, high) triple:
the pessimistic, most likely, and optimistic estimate. The triple defines
a triangular density on [low, high], sampled by inverse CDF so that one
uniform value in [0, 1) fully determines the sample.

Uniforms come from :class:`SampleStream`, which hashes
(master seed, iteration, variable id) into a value in [0, 1). Because each
variable's uniform is a pure function of that triple, runs are reproducible
regardless of evaluation order, worker count, or which other variables a
model happens to sample.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

_TWO64 = 2.0**64
_SEED_MASK = 0xFFFFFFFFFFFFFFFF


class OrderingViolation(ValueError):
    """low <= mode <= high does not hold; the message names the bad bound."""


class NonFinite(ValueError):
    """A distribution bound is NaN or infinite."""


class InvalidUniform(ValueError):
    """Uniform input to inverse-CDF sampling lies outside [0, 1)."""


def validate_triple(low: float, mode: float, high: float) -> None:
    """Raise unless (low, mode, high) is a finite, ordered triple.

    The degenerate case low == mode == high is legal: it is the way fixed
    (certain) quantities are carried through the sampling machinery.
    """
    for name, value in (("low", low), ("mode", mode), ("high", high)):
        if not math.isfinite(value):
            raise NonFinite(f"{name} must be finite, got {value!r}")
    if mode < low:
        raise OrderingViolation(f"mode ({mode}) is below low ({low})")
    if high < mode:
        raise OrderingViolation(f"high ({high}) is below mode ({mode})")


@dataclass(frozen=True)
class TriangularDist:
    """Triangular distribution on [low, high] with most-likely value ``mode``."""

    low: float
    mode: float
    high: float

    def __post_init__(self) -> None:
        validate_triple(self.low, self.mode, self.high)

    @property
    def is_degenerate(self) -> bool:
        """True when the distribution is a point mass (low == high)."""
        return self.low == self.high

    def mean(self) -> float:
        """Analytic mean, (low + mode + high) / 3."""
        return (self.low + self.mode + self.high) / 3.0

    def cdf(self, x: float) -> float:
        """P(X <= x)."""
        if self.is_degenerate:
            return 0.0 if x < self.low else 1.0
        if x <= self.low:
            return 0.0
        if x >= self.high:
            return 1.0
        span = self.high - self.low
        if x <= self.mode:
            rising = self.mode - self.low
            # rising == 0 only when x <= mode == low, caught by x <= low above
            return (x - self.low) ** 2 / (span * rising)
        falling = self.high - self.mode
        return 1.0 - (self.high - x) ** 2 / (span * falling)

    def sample(self, u: float) -> float:
        """Inverse CDF at ``u`` in [0, 1).

        For u <= F(mode) = (mode - low) / (high - low) the sample is
        low + sqrt(u * (high - low) * (mode - low)); otherwise it is
        high - sqrt((1 - u) * (high - low) * (high - mode)). A degenerate
        distribution returns its constant for any u.
        """
        if not 0.0 <= u < 1.0:
            raise InvalidUniform(f"u must lie in [0, 1), got {u!r}")
        if self.is_degenerate:
            return self.low
        span = self.high - self.low
        split = (self.mode - self.low) / span
        if u <= split:
            value = self.low + math.sqrt(u * span * (self.mode - self.low))
        else:
            value = self.high - math.sqrt((1.0 - u) * span * (self.high - self.mode))
        # sqrt rounding can land a hair outside the support; the bounds are a
        # hard invariant, so clamp.
        return min(max(value, self.low), self.high)


@dataclass(frozen=True)
class SampleStream:
    """Deterministic per-variable uniform source keyed by a master seed.

    ``uniform(iteration, variable_id)`` is a pure function of
    (master_seed, iteration, variable_id): the same triple always yields the
    same value, on any platform, in any process. Keying by variable id (rather
    than drawing from one sequential stream) means adding or removing a
    variable from a model never perturbs any other variable's draws.
    """

    master_seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= _SEED_MASK:
            raise ValueError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}"
            )

    def uniform(self, iteration: int, variable_id: str) -> float:
        """Uniform in [0, 1) for one (iteration, variable) cell."""
        if iteration < 0:
            raise ValueError(f"iteration must be non-negative, got {iteration!r}")
        digest = hashlib.blake2b(
            f"{iteration}:{variable_id}".encode("utf-8"),
            digest_size=8,
            key=self.master_seed.to_bytes(8, "little"),
        ).digest()
        return int.from_bytes(digest, "little") / _TWO64
