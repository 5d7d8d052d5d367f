"""Overflow-safe complex arithmetic and deterministic summation.

Everything downstream manipulates quantities like q**(n*n*(1-s)) whose
magnitudes leave IEEE double range long before the mathematics becomes
interesting.  The fix is structural rather than big-float: complex values
are carried as (log-magnitude, phase) pairs, and finite sums are evaluated
by factoring out the largest log-magnitude and compensated-summing the
rescaled residuals in a deterministic order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

_TAU = 2.0 * math.pi
_NEG_INF = float("-inf")


class QprError(Exception):
    """Base class for errors raised by this package."""


class DomainError(QprError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(QprError, RuntimeError):
    """A certified truncation test was not met within the term cap."""


class RangeGuardError(QprError, OverflowError):
    """A direct evaluation would leave double range; use a normalized path."""


def wrap_phase(phi: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    r = math.remainder(phi, _TAU)
    if r <= -math.pi:
        r += _TAU
    return r


_HALF_PI = 0.5 * math.pi

# Quarter-turn phases recur constantly here ((-x)^k, i^k, e^(+-pi i k/2));
# handling their integer multiples by parity instead of float k*phi keeps
# structurally real/imaginary quantities exactly on their axis.
_QUARTER_STEPS = {0.0: 0, _HALF_PI: 1, math.pi: 2, -_HALF_PI: 3}
_QUARTER_PHASES = (0.0, _HALF_PI, math.pi, -_HALF_PI)


def phase_mul_int(phi: float, k: int) -> float:
    """wrap_phase(k * phi), exact when phi is a multiple of pi/2."""
    step = _QUARTER_STEPS.get(phi)
    if step is not None:
        return _QUARTER_PHASES[(step * k) % 4]
    return wrap_phase(k * phi)


def cis(phi: float) -> tuple[float, float]:
    """(cos phi, sin phi), exact on the four cardinal directions."""
    if phi == 0.0:
        return 1.0, 0.0
    if phi == math.pi:
        return -1.0, 0.0
    if phi == _HALF_PI:
        return 0.0, 1.0
    if phi == -_HALF_PI:
        return 0.0, -1.0
    return math.cos(phi), math.sin(phi)


@dataclass(frozen=True, slots=True)
class LogPolarComplex:
    """A complex number stored as log|w| and arg(w) in (-pi, pi].

    log_mag = -inf encodes zero (phase fixed at 0).  The representation is
    exact under multiplication and integer powers, which is what the huge
    prefactors here need; addition goes through :func:`sum_rescaled`.
    """

    log_mag: float
    phase: float

    def to_complex(self) -> complex:
        """Ordinary complex value; overflows to inf beyond double range."""
        if self.log_mag == _NEG_INF:
            return 0j
        if self.log_mag > 709.0:
            mag = math.inf
        else:
            mag = math.exp(self.log_mag)
        c, s = cis(self.phase)
        return complex(mag * c, mag * s)

    @property
    def is_zero(self) -> bool:
        return self.log_mag == _NEG_INF

    def log10_mag(self) -> float:
        return self.log_mag / math.log(10.0)


LP_ONE = LogPolarComplex(0.0, 0.0)
LP_ZERO = LogPolarComplex(_NEG_INF, 0.0)


def lp(log_mag: float, phase: float) -> LogPolarComplex:
    """Build a LogPolarComplex, normalizing the phase."""
    if log_mag == _NEG_INF:
        return LP_ZERO
    return LogPolarComplex(log_mag, wrap_phase(phase))


def lp_from_complex(w: complex) -> LogPolarComplex:
    w = complex(w)
    if w == 0:
        return LP_ZERO
    return LogPolarComplex(math.log(abs(w)), cmath.phase(w))


def lp_from_real(x: float) -> LogPolarComplex:
    """Log-polar form of a real number (phase 0 or pi)."""
    if x == 0.0:
        return LP_ZERO
    return LogPolarComplex(math.log(abs(x)), 0.0 if x > 0 else math.pi)


def lp_mul(a: LogPolarComplex, b: LogPolarComplex) -> LogPolarComplex:
    if a.is_zero or b.is_zero:
        return LP_ZERO
    return lp(a.log_mag + b.log_mag, a.phase + b.phase)


def lp_div(a: LogPolarComplex, b: LogPolarComplex) -> LogPolarComplex:
    if b.is_zero:
        raise DomainError("division by log-polar zero")
    if a.is_zero:
        return LP_ZERO
    return lp(a.log_mag - b.log_mag, a.phase - b.phase)


def lp_pow_int(b: LogPolarComplex, k: int) -> LogPolarComplex:
    """Integer power of a log-polar value.

    Integer exponents keep the result branch-unambiguous: the phase is
    k*phase reduced into (-pi, pi], with no branch cut to choose.
    """
    if not isinstance(k, int):
        raise DomainError("exponent must be an integer")
    if k == 0:
        return LP_ONE
    if b.is_zero:
        if k < 0:
            raise DomainError("zero base with negative integer exponent")
        return LP_ZERO
    return LogPolarComplex(k * b.log_mag, phase_mul_int(b.phase, k))


@dataclass(frozen=True, slots=True)
class SummationResult:
    """Result of a rescaled compensated sum.

    The represented value is ``value * exp(rescale_log)``; ``value`` itself
    is always finite when every input term had finite log-magnitude.
    """

    value: complex
    rescale_log: float
    term_count: int
    max_term_log: float

    def to_lp(self) -> LogPolarComplex:
        if self.value == 0:
            return LP_ZERO
        return LogPolarComplex(
            math.log(abs(self.value)) + self.rescale_log, cmath.phase(self.value)
        )

    def to_complex(self) -> complex:
        return self.to_lp().to_complex()


class _Neumaier:
    """Kahan-Babuska-Neumaier compensated accumulator for one real axis."""

    __slots__ = ("total", "comp")

    def __init__(self) -> None:
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    def result(self) -> float:
        return self.total + self.comp


def sum_rescaled(terms: Sequence[LogPolarComplex] | Iterable[LogPolarComplex]) -> SummationResult:
    """Sum log-polar terms without overflow, deterministically.

    The maximum log-magnitude is factored out, the rescaled terms are
    converted to ordinary complex and accumulated in descending-magnitude
    order (ties broken by original index) with compensated summation.  For a
    fixed multiset of inputs the result is reproducible bit for bit.
    """
    items = [(t.log_mag, i, t.phase) for i, t in enumerate(terms)]
    finite = [(lm, i, ph) for lm, i, ph in items if lm != _NEG_INF]
    if not finite:
        return SummationResult(0j, 0.0, len(items), _NEG_INF)
    big = max(lm for lm, _, _ in finite)
    finite.sort(key=lambda t: (-t[0], t[1]))
    re = _Neumaier()
    im = _Neumaier()
    for lm, _, ph in finite:
        w = math.exp(lm - big)
        c, s = cis(ph)
        re.add(w * c)
        im.add(w * s)
    return SummationResult(complex(re.result(), im.result()), big, len(items), big)
