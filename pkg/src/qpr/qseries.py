"""Base-q special functions: Pochhammer symbols, q-binomials, the entire
functions A_q and B_q, the bilateral theta series, and the two tail
remainders R1, R2 with their explicit majorants.

Conventions.  (a;q)_0 = 1 and (a;q)_n has n factors 1 - a*q^k, k = 0..n-1;
the n-factor convention is forced by the q-binomial/degree identities this
module is checked against.  Infinite products and series never truncate on
term count alone: each loop carries a geometric majorant for its tail and
stops only once that majorant clears the requested tolerance, with the term
cap acting purely as a safety net that raises ConvergenceError.

All series are generated termwise in log-polar form and summed with
:func:`qpr.numerics.sum_rescaled`, so arguments of extreme magnitude cannot
overflow intermediate arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .numerics import (
    ConvergenceError,
    DomainError,
    LogPolarComplex,
    lp,
    phase_mul_int,
    sum_rescaled,
)

DEFAULT_TOL = 1e-15
DEFAULT_MAX_TERMS = 10_000

# Once a*q^k drops below this, further factors of (a;q)_k no longer move a
# double-precision log; the product is treated as converged.
_SATURATION = 1e-18


@dataclass(frozen=True)
class QContext:
    """Fixed problem data shared by every evaluator.

    q in (0,1), alpha > -1 and z != 0 are hard requirements of the whole
    theory; tol and max_terms control certified truncation.
    """

    q: float
    alpha: float
    z: complex
    tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self) -> None:
        if not (0.0 < self.q < 1.0):
            raise DomainError(f"q must lie in (0,1), got {self.q}")
        if not (self.alpha > -1.0):
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")
        object.__setattr__(self, "z", complex(self.z))
        if self.z == 0:
            raise DomainError("z must be nonzero")
        if not (0.0 < self.tol < 1.0):
            raise DomainError(f"tol must lie in (0,1), got {self.tol}")
        if self.max_terms < 16:
            raise DomainError("max_terms too small to certify anything")

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def abs_z(self) -> float:
        return abs(self.z)


class _PochTable:
    """Cumulative log (a;q)_k for real a < 1, built once to saturation.

    All factors 1 - a*q^k are then positive, so the product is a positive
    real carried as a log.  Indices past the saturation point return the
    converged value, which equals log (a;q)_inf to double precision.
    """

    __slots__ = ("a", "q", "logs", "sat")

    def __init__(self, a: float, q: float, max_terms: int) -> None:
        if a >= 1.0:
            raise DomainError(f"log table requires a < 1, got a={a}")
        if not (0.0 < q < 1.0):
            raise DomainError(f"log table requires 0 < q < 1, got q={q}")
        logs = [0.0]
        acc = 0.0
        aqk = a
        k = 0
        while abs(aqk) > _SATURATION:
            acc += math.log1p(-aqk)
            logs.append(acc)
            aqk *= q
            k += 1
            if k > max_terms:
                raise ConvergenceError(
                    f"(a;q)_inf with a={a}, q={q} did not saturate within "
                    f"{max_terms} factors; q is too close to 1 for doubles"
                )
        self.a = a
        self.q = q
        self.logs = logs
        self.sat = len(logs) - 1

    def log(self, k: int) -> float:
        if k < 0:
            raise DomainError("Pochhammer index must be nonnegative")
        return self.logs[k] if k < self.sat else self.logs[self.sat]

    @property
    def log_inf(self) -> float:
        return self.logs[self.sat]


@lru_cache(maxsize=256)
def poch_table(a: float, q: float, max_terms: int = DEFAULT_MAX_TERMS) -> _PochTable:
    """Cached saturating log table for (a;q)_k, real a < 1."""
    return _PochTable(a, q, max_terms)


_poch_table = poch_table


def log_pochhammer_real(a: float, q: float, n: int | None,
                        max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """log (a;q)_n for real a < 1 (n = None means the infinite product)."""
    table = _poch_table(a, q, max_terms)
    if n is None:
        return table.log_inf
    return table.log(n)


def euler_log(q: float, max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """log (q;q)_inf."""
    return _poch_table(q, q, max_terms).log_inf


def pochhammer(a: complex, q: float, n: int | float | None,
               tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """(a;q)_n for complex a; n may be a nonnegative integer or infinite.

    The infinite case requires |q| < 1 and truncates once the remaining
    factors are within tol of 1, certified by the geometric tail bound
    2|a||q|^k/(1-|q|).
    """
    infinite = n is None or (isinstance(n, float) and math.isinf(n))
    if not infinite:
        if not isinstance(n, int) or isinstance(n, bool):
            if isinstance(n, float) and n.is_integer():
                n = int(n)
            else:
                raise DomainError(f"n must be an integer or infinity, got {n!r}")
        if n < 0:
            raise DomainError(f"negative Pochhammer order {n}")
    else:
        if not abs(q) < 1.0:
            raise DomainError(f"infinite product needs |q| < 1, got q={q}")

    a = complex(a)
    prod = complex(1.0)
    aqk = a
    k = 0
    while True:
        if not infinite and k >= n:
            return prod
        if infinite:
            tail = 2.0 * abs(aqk) / (1.0 - abs(q))
            if abs(aqk) <= 0.5 and tail <= tol:
                return prod
        prod *= 1.0 - aqk
        aqk *= q
        k += 1
        if k > max_terms:
            raise ConvergenceError(
                f"(a;q)_inf with |a|={abs(a):.3g}, q={q} not certified within {max_terms} factors"
            )


def q_binomial(n: int, k: int, q: float, max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """Gaussian binomial coefficient (q;q)_n / ((q;q)_k (q;q)_{n-k}); positive."""
    if not (0 <= k <= n):
        raise DomainError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if not (0.0 < q < 1.0):
        raise DomainError(f"q_binomial needs 0 < q < 1, got q={q}")
    t = _poch_table(q, q, max_terms)
    return math.exp(t.log(n) - t.log(k) - t.log(n - k))


def _series_lp(term_log, term_phase, ratio_bound, tol: float, max_terms: int,
               start: int = 0) -> list[LogPolarComplex]:
    """Collect log-polar series terms under a certified stopping rule.

    term_log(k)/term_phase(k) describe term k; ratio_bound(k) must majorize
    |t_{k+1}/t_k|.  Generation stops once the ratio bound is <= 1/2 and the
    current term sits tol/4 below the largest term seen, so the discarded
    tail is at most 2|t_k| <= (tol/2) * max-term.
    """
    log_tol = math.log(tol) - math.log(4.0)
    terms: list[LogPolarComplex] = []
    max_log = -math.inf
    k = start
    while True:
        tl = term_log(k)
        if tl != -math.inf:
            terms.append(lp(tl, term_phase(k)))
            max_log = max(max_log, tl)
        if ratio_bound(k) <= 0.5 and (tl == -math.inf or tl <= max_log + log_tol):
            return terms
        k += 1
        if k - start > max_terms:
            raise ConvergenceError(f"series not certified within {max_terms} terms")


def ramanujan_a(q: float, z: complex, tol: float = DEFAULT_TOL,
                max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """The entire function sum_k q^(k^2) (-z)^k / (q;q)_k."""
    return _aq_like(q, z, negate=True, tol=tol, max_terms=max_terms)


def b_function(q: float, z: complex, tol: float = DEFAULT_TOL,
               max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Companion series sum_k q^(k^2) z^k / (q;q)_k, majorant of |A_q|."""
    return _aq_like(q, z, negate=False, tol=tol, max_terms=max_terms)


def _aq_like(q: float, z: complex, negate: bool, tol: float, max_terms: int) -> complex:
    if not abs(q) < 1.0:
        raise DomainError(f"series needs |q| < 1, got q={q}")
    z = complex(z)
    if z == 0:
        return 1.0 + 0j
    table = _poch_table(q, q, max_terms)
    lq = math.log(q)
    lz = math.log(abs(z))
    ph = cmath.phase(-z if negate else z)
    terms = _series_lp(
        term_log=lambda k: k * k * lq + k * lz - table.log(k),
        term_phase=lambda k: phase_mul_int(ph, k),
        ratio_bound=lambda k: (q ** (2 * k + 1)) * abs(z) / (1.0 - q),
        tol=tol,
        max_terms=max_terms,
    )
    return sum_rescaled(terms).to_complex()


def ramanujan_a_deriv(q: float, z: complex, tol: float = DEFAULT_TOL,
                      max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Termwise derivative of ramanujan_a: -sum_{k>=1} k q^(k^2) (-z)^(k-1) / (q;q)_k."""
    if not abs(q) < 1.0:
        raise DomainError(f"series needs |q| < 1, got q={q}")
    z = complex(z)
    table = _poch_table(q, q, max_terms)
    lq = math.log(q)
    if z == 0:
        return -q / (1.0 - q) + 0j
    lz = math.log(abs(z))
    ph = cmath.phase(-z)
    pi = math.pi
    terms = _series_lp(
        term_log=lambda k: k * k * lq + (k - 1) * lz + math.log(k) - table.log(k),
        term_phase=lambda k: phase_mul_int(ph, k - 1) + pi,
        ratio_bound=lambda k: (q ** (2 * k + 1)) * abs(z) * (k + 1) / (k * (1.0 - q)),
        tol=tol,
        max_terms=max_terms,
        start=1,
    )
    return sum_rescaled(terms).to_complex()


def euler_product_series_check(z: complex, q: float, tol: float = DEFAULT_TOL,
                               max_terms: int = DEFAULT_MAX_TERMS) -> tuple[complex, complex]:
    """(z;q)_inf two ways: infinite product, and the q-exponential series
    sum_k q^(k(k-1)/2) (-z)^k / (q;q)_k.  Returned as a cross-check pair."""
    if not abs(q) < 1.0:
        raise DomainError(f"identity needs |q| < 1, got q={q}")
    lhs = pochhammer(z, q, None, tol=tol, max_terms=max_terms)
    z = complex(z)
    if z == 0:
        return lhs, 1.0 + 0j
    table = _poch_table(q, q, max_terms)
    lq = math.log(q)
    lz = math.log(abs(z))
    ph = cmath.phase(-z)
    terms = _series_lp(
        term_log=lambda k: 0.5 * k * (k - 1) * lq + k * lz - table.log(k),
        term_phase=lambda k: phase_mul_int(ph, k),
        ratio_bound=lambda k: (q ** k) * abs(z) / (1.0 - q),
        tol=tol,
        max_terms=max_terms,
    )
    rhs = sum_rescaled(terms).to_complex()
    return lhs, rhs


def theta_lp(z: complex, q: float, tol: float = DEFAULT_TOL,
             max_terms: int = DEFAULT_MAX_TERMS) -> LogPolarComplex:
    """Bilateral theta sum_{n in Z} q^(n^2) z^n in log-polar form.

    Both tails are truncated symmetrically under their own geometric
    majorants 2 q^(J^2) |z|^(+-J) once the step ratio q^(2J+1)|z|^(+-1)
    falls below 1/2.
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"theta needs 0 < q < 1, got q={q}")
    z = complex(z)
    if z == 0:
        raise DomainError("theta is undefined at z = 0")
    lq = math.log(q)
    lz = math.log(abs(z))
    ph = cmath.phase(z)
    log_tol = math.log(tol) - math.log(4.0)

    terms = [lp(0.0, 0.0)]
    for sign in (+1, -1):
        max_log = 0.0
        j = 1
        while True:
            tl = j * j * lq + sign * j * lz
            terms.append(lp(tl, phase_mul_int(ph, sign * j)))
            max_log = max(max_log, tl)
            ratio = math.exp((2 * j + 1) * lq + sign * lz)
            if ratio <= 0.5 and tl <= max_log + log_tol:
                break
            j += 1
            if j > max_terms:
                raise ConvergenceError(
                    f"theta tail not certified within {max_terms} terms (q={q}, |z|={abs(z):.3g})"
                )
    return sum_rescaled(terms).to_lp()


def theta(z: complex, q: float, tol: float = DEFAULT_TOL,
          max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    return theta_lp(z, q, tol=tol, max_terms=max_terms).to_complex()


def theta_triple_product(z: complex, q: float, tol: float = DEFAULT_TOL,
                         max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Theta via the triple product (q^2; q^2)_inf (-qz; q^2)_inf (-q/z; q^2)_inf."""
    if not (0.0 < q < 1.0):
        raise DomainError(f"triple product needs 0 < q < 1, got q={q}")
    z = complex(z)
    if z == 0:
        raise DomainError("triple product is undefined at z = 0")
    q2 = q * q
    p1 = pochhammer(q2, q2, None, tol=tol, max_terms=max_terms)
    p2 = pochhammer(-q * z, q2, None, tol=tol, max_terms=max_terms)
    p3 = pochhammer(-q / z, q2, None, tol=tol, max_terms=max_terms)
    return p1 * p2 * p3


def remainder_r1(a: float, n: int, q: float, tol: float = DEFAULT_TOL,
                 max_terms: int = DEFAULT_MAX_TERMS) -> tuple[float, float]:
    """R1(a;n) = (a q^n; q)_inf - 1 together with its majorant
    (-a q^2; q)_inf * a q^n / (1-q); |R1| <= bound for a > 0."""
    if not a > 0:
        raise DomainError(f"R1 needs a > 0, got a={a}")
    if n < 0:
        raise DomainError(f"R1 needs n >= 0, got n={n}")
    if not (0.0 < q < 1.0):
        raise DomainError(f"R1 needs 0 < q < 1, got q={q}")
    value = pochhammer(a * q ** n, q, None, tol=tol, max_terms=max_terms).real - 1.0
    grow = pochhammer(-a * q * q, q, None, tol=tol, max_terms=max_terms).real
    bound = grow * a * q ** n / (1.0 - q)
    return value, bound


def remainder_r2(a: float, n: int, q: float, tol: float = DEFAULT_TOL,
                 max_terms: int = DEFAULT_MAX_TERMS) -> tuple[float, float]:
    """R2(a;n) = 1/(a q^n; q)_inf - 1 with majorant a q^n / ((1-q)(aq;q)_inf).

    Beyond the stated 0 < aq < 1 this also needs a q^n < 1, otherwise the
    product can vanish (division by zero) and the majorant's derivation
    breaks down; both are rejected here.
    """
    if n < 0:
        raise DomainError(f"R2 needs n >= 0, got n={n}")
    if not (0.0 < q < 1.0):
        raise DomainError(f"R2 needs 0 < q < 1, got q={q}")
    if not (0.0 < a * q < 1.0):
        raise DomainError(f"R2 needs 0 < a*q < 1, got a*q={a * q}")
    if not a * q ** n < 1.0:
        raise DomainError(f"R2 needs a*q^n < 1, got {a * q ** n}")
    value = 1.0 / pochhammer(a * q ** n, q, None, tol=tol, max_terms=max_terms).real - 1.0
    bound = a * q ** n / ((1.0 - q) * pochhammer(a * q, q, None, tol=tol, max_terms=max_terms).real)
    return value, bound
