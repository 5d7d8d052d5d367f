"""Number-theoretic support: exact floor/fractional decomposition of n*x,
the parity character chi, fractional-part orbits, continued-fraction
convergents, and the witness searches that certify the arithmetic
hypotheses of the irrational-parameter asymptotic regimes.

Scaling parameters are *declared*, never sniffed: a RealValue is either an
exact rational, an exact quadratic surd (a + b*sqrt(d))/c, or a bare float
whose rationality must be asserted by the caller.  The exact kinds support
integer-arithmetic reduction of n*x mod 1, so fractional parts stay
accurate to ~1e-16 no matter how large n gets; bare floats fall back to
double arithmetic and carry a trust threshold on accepted residuals.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .numerics import DomainError

_EPS = sys.float_info.epsilon

# Accepted residuals from float-kind inputs below this many epsilons (scaled
# by n) cannot be distinguished from representation error of the input.
_TRUST_FACTOR = 1000.0


def floor_frac(x: float) -> tuple[int, float]:
    """x = floor + frac with frac in [0,1) and floor the greatest integer <= x."""
    f = math.floor(x)
    r = x - f
    if r >= 1.0:  # float rounding right below an integer
        f += 1
        r = 0.0
    return f, r


def chi(n: int) -> int:
    """Parity indicator n - 2*floor(n/2): 1 for odd n, 0 for even n."""
    return n - 2 * (n // 2)


@dataclass(frozen=True)
class RealValue:
    """A real parameter with declared arithmetic structure.

    kind "rational": exact Fraction.
    kind "surd":     (a + b*sqrt(d))/c with integers a, b != 0, c > 0 and
                     d > 0 not a perfect square.
    kind "float":    double only; assumed_rational records the caller's
                     declaration (None = undeclared).
    """

    kind: str
    fraction: Fraction | None = None
    surd: tuple[int, int, int, int] | None = None
    approx: float = 0.0
    assumed_rational: bool | None = None
    label: str = ""

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(x: Fraction | int | str, label: str = "") -> "RealValue":
        f = Fraction(x)
        return RealValue(kind="rational", fraction=f, approx=float(f),
                         label=label or str(f))

    @staticmethod
    def from_surd(a: int, b: int, c: int, d: int, label: str = "") -> "RealValue":
        if c == 0:
            raise DomainError("surd denominator must be nonzero")
        if d < 0:
            raise DomainError("surd radicand must be nonnegative")
        r = math.isqrt(d)
        if b == 0 or r * r == d:
            return RealValue.from_rational(Fraction(a + b * r, c), label=label)
        if c < 0:
            a, b, c = -a, -b, -c
        approx = (a + b * math.sqrt(d)) / c
        return RealValue(kind="surd", surd=(a, b, c, d), approx=approx,
                         label=label or f"({a}+{b}*sqrt({d}))/{c}")

    @staticmethod
    def from_float(x: float, assumed_rational: bool | None = None,
                   label: str = "") -> "RealValue":
        return RealValue(kind="float", approx=float(x),
                         assumed_rational=assumed_rational, label=label or repr(float(x)))

    # -- basic queries -------------------------------------------------

    @property
    def value(self) -> float:
        if self.kind == "rational":
            return float(self.fraction)
        return self.approx

    @property
    def exact(self) -> bool:
        return self.kind in ("rational", "surd")

    def declared_rational(self) -> bool:
        if self.kind == "rational":
            return True
        if self.kind == "surd":
            return False
        if self.assumed_rational is None:
            raise DomainError(
                f"rationality of {self.label!r} is undeclared; pass an exact "
                "rational/surd or declare an assumption"
            )
        return self.assumed_rational

    def is_zero(self) -> bool:
        if self.kind == "rational":
            return self.fraction == 0
        if self.kind == "surd":
            return False
        return self.approx == 0.0

    def neg(self) -> "RealValue":
        if self.kind == "rational":
            return RealValue.from_rational(-self.fraction, label=f"-({self.label})")
        if self.kind == "surd":
            a, b, c, d = self.surd
            return RealValue.from_surd(-a, -b, c, d, label=f"-({self.label})")
        return RealValue.from_float(-self.approx, self.assumed_rational,
                                    label=f"-({self.label})")

    # -- exact reduction of n*x ----------------------------------------

    def mul_floor_frac(self, n: int) -> tuple[int, float]:
        """floor(n*x) and {n*x}, exactly for rational/surd kinds.

        For surds the integer part comes out of an exact isqrt, and the
        fractional part is assembled from an integer remainder plus a
        well-conditioned sqrt correction, so it is accurate to ~1e-16
        absolute even when n*x is enormous.
        """
        if self.kind == "rational":
            y = n * self.fraction
            f = y.numerator // y.denominator
            return f, float(y - f)
        if self.kind == "surd":
            a, b, c, d = self.surd
            n1 = n * a
            bb = n * b
            if bb == 0:
                y = Fraction(n1, c)
                f = y.numerator // y.denominator
                return f, float(y - f)
            s = bb * bb * d
            r = math.isqrt(s)
            delta = (s - r * r) / (math.sqrt(s) + r)  # sqrt(s) = r + delta, 0 < delta < 1
            if bb > 0:
                top = n1 + r
                f = top // c
                e = top - c * f
                frac = (e + delta) / c
            else:
                top = n1 - r - 1
                f = top // c
                e = top - c * f
                frac = (e + (1.0 - delta)) / c
            if frac >= 1.0:
                frac = math.nextafter(1.0, 0.0)
            return f, frac
        return floor_frac(n * self.approx)

    def frac_fraction(self, n: int) -> Fraction:
        """Exact fractional part of n*x for rational kind."""
        if self.kind != "rational":
            raise DomainError("exact fractional part requires a rational RealValue")
        y = n * self.fraction
        return y - (y.numerator // y.denominator)


def as_real_value(x) -> RealValue:
    """Coerce ints, Fractions and RealValues; floats must be pre-declared."""
    if isinstance(x, RealValue):
        return x
    if isinstance(x, (int, Fraction)):
        return RealValue.from_rational(x)
    if isinstance(x, float):
        if x.is_integer():
            return RealValue.from_rational(int(x))
        raise DomainError(
            f"bare float {x!r} has undeclared rationality; use RealValue.from_float "
            "with an assumption, an exact Fraction, or a fixture name"
        )
    raise DomainError(f"cannot interpret {x!r} as a real parameter")


_FIXTURE_TOKENS = ("sqrt2", "sqrt3", "golden", "phi", "liouville")


def parse_real(token: str, assume: str | None = None) -> RealValue:
    """Parse a CLI-style real token: fixture name, 'a/b', integer, or decimal.

    Free decimals are only accepted when assume is 'rational' or
    'irrational'; rationality drives case dispatch and cannot be guessed
    from a double.
    """
    t = token.strip().lower()
    neg = t.startswith("-") and t[1:] in _FIXTURE_TOKENS
    name = t[1:] if neg else t
    if name in _FIXTURE_TOKENS:
        fx = fixture_irrationals()["golden" if name == "phi" else name]
        return fx.value.neg() if neg else fx.value
    if "." not in t and "e" not in t:  # integer or a/b: exact by syntax
        try:
            return RealValue.from_rational(Fraction(t), label=token.strip())
        except (ValueError, ZeroDivisionError):
            pass
    try:
        x = float(t)
    except ValueError as exc:
        raise DomainError(f"cannot parse real parameter {token!r}") from exc
    if assume == "rational":
        # a decimal literal denotes an exact rational once declared so
        return RealValue.from_rational(Fraction(t), label=token.strip())
    if assume == "irrational":
        return RealValue.from_float(x, assumed_rational=False, label=token.strip())
    return RealValue.from_float(x, assumed_rational=None, label=token.strip())


@dataclass(frozen=True)
class IrrationalFixture:
    name: str
    value: RealValue
    irrationality_measure: float
    truncation_depth: int | None = None
    note: str = ""


def liouville_truncated(depth: int = 4) -> Fraction:
    """sum_{k=1}^{depth} 10^(-k!), an exact rational stand-in whose limit is
    approximable to every polynomial order."""
    if depth < 1:
        raise DomainError("truncation depth must be >= 1")
    return sum(Fraction(1, 10 ** math.factorial(k)) for k in range(1, depth + 1))


def fixture_irrationals(liouville_depth: int = 4) -> dict[str, IrrationalFixture]:
    """Named constants for tests and the CLI.

    The quadratic surds carry irrationality measure exactly 2; the Liouville
    entry is a rational truncation (measure of its limit is infinite) and
    records its depth.
    """
    return {
        "sqrt2": IrrationalFixture(
            "sqrt2", RealValue.from_surd(0, 1, 1, 2, label="sqrt2"), 2.0),
        "sqrt3": IrrationalFixture(
            "sqrt3", RealValue.from_surd(0, 1, 1, 3, label="sqrt3"), 2.0),
        "golden": IrrationalFixture(
            "golden", RealValue.from_surd(1, 1, 2, 5, label="golden"), 2.0),
        "liouville": IrrationalFixture(
            "liouville",
            RealValue.from_rational(liouville_truncated(liouville_depth),
                                    label=f"liouville[{liouville_depth}]"),
            math.inf,
            truncation_depth=liouville_depth,
            note="rational truncation; the declared measure is that of the limit"),
    }


def orbit(theta: RealValue | Fraction | int, n_max: int) -> list[tuple[int, float]]:
    """[(n, {n*theta}) for n = 1..n_max]."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    th = as_real_value(theta)
    return [(n, th.mul_floor_frac(n)[1]) for n in range(1, n_max + 1)]


def convergents(theta: RealValue | Fraction | int | float, count: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents p/q with |theta - p/q| < 1/q^2.

    Rational inputs terminate at the exact value; surds iterate with exact
    integer state; bare floats run Euclid until double precision runs out.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if isinstance(theta, float) and not isinstance(theta, bool):
        th = RealValue.from_float(theta)
    else:
        th = as_real_value(theta)
    if th.kind == "rational":
        return _convergents_rational(th.fraction, count)
    if th.kind == "surd":
        return _convergents_surd(th.surd, count)
    return _convergents_float(th.approx, count)


_CF_SEED = [0, 1, 1, 0]  # p_{-2}, q_{-2}, p_{-1}, q_{-1}


def _push(conv: list[tuple[int, int]], state: list[int], a: int) -> None:
    p0, q0, p1, q1 = state
    p, q = a * p1 + p0, a * q1 + q0
    state[:] = [p1, q1, p, q]
    conv.append((p, q))


def _convergents_rational(x: Fraction, count: int) -> list[tuple[int, int]]:
    conv: list[tuple[int, int]] = []
    state = list(_CF_SEED)
    num, den = x.numerator, x.denominator
    while den != 0 and len(conv) < count:
        a, rem = divmod(num, den)
        _push(conv, state, a)
        num, den = den, rem
    return conv


def _convergents_surd(surd: tuple[int, int, int, int], count: int) -> list[tuple[int, int]]:
    a0, b0, c0, d = surd
    # Normalize to (P + sqrt(D))/Q with Q | D - P^2 so the recurrence stays integral.
    if b0 > 0:
        p, dd, qq = a0, b0 * b0 * d, c0
    else:
        p, dd, qq = -a0, b0 * b0 * d, -c0
    scale = abs(qq)
    p, dd, qq = p * scale, dd * scale * scale, qq * scale

    conv: list[tuple[int, int]] = []
    state = list(_CF_SEED)
    r_all = math.isqrt(dd)
    while len(conv) < count:
        if qq > 0:
            a = (p + r_all) // qq
        else:
            a = -((p + r_all) // (-qq)) - 1
        _push(conv, state, a)
        p = a * qq - p
        qq = (dd - p * p) // qq
    return conv


def _convergents_float(x: float, count: int) -> list[tuple[int, int]]:
    conv: list[tuple[int, int]] = []
    state = list(_CF_SEED)
    y = x
    for _ in range(count):
        a = math.floor(y)
        _push(conv, state, a)
        rem = y - a
        q = state[3]
        if rem < 1e-12 or q > 1e15:  # double fidelity exhausted
            break
        y = 1.0 / rem
    return conv


@dataclass(frozen=True)
class DiophantineWitness:
    """A certificate n*theta = m + beta + residual with |residual| < n^-rho.

    m1/residual2/target_beta2 are filled by joint searches (the second angle's
    components); trusted is False when a float-kind input cannot support the
    claimed residual at this n.
    """

    n: int
    m: int
    m1: int | None
    target_beta: float
    residual: float
    rho: float
    trusted: bool = True
    target_beta2: float | None = None
    residual2: float | None = None

    @property
    def acceptance(self) -> float:
        r = abs(self.residual)
        if self.residual2 is not None:
            r = max(r, abs(self.residual2))
        return r


def _beta_pair(beta) -> tuple[Fraction | None, float]:
    if isinstance(beta, Fraction) or isinstance(beta, int):
        bf = Fraction(beta)
        return bf, float(bf)
    return None, float(beta)


def _decompose(th: RealValue, n: int, beta_frac: Fraction | None, beta: float) -> tuple[int, float]:
    """m and residual with n*theta = m + beta + residual, residual in [-1/2, 1/2]."""
    if th.kind == "rational" and beta_frac is not None:
        fl, _ = th.mul_floor_frac(n)
        d = th.frac_fraction(n) - beta_frac
        shift = math.floor(d + Fraction(1, 2))
        return fl + shift, float(d - shift)
    fl, fr = th.mul_floor_frac(n)
    d = fr - beta
    shift = math.floor(d + 0.5)
    return fl + shift, d - shift


def _trusted(th: RealValue, residual: float, n: int) -> bool:
    if th.exact:
        return True
    return abs(residual) > _TRUST_FACTOR * _EPS * n


def witness_search(theta: RealValue | Fraction | int, beta, rho: float,
                   n_max: int) -> list[DiophantineWitness]:
    """Scan n = 1..n_max for |n*theta - beta - m| < n^-rho, m = nearest integer.

    A plain linear scan: the inhomogeneous problem has no convergent
    shortcut, and desk-scale n_max is cheap.  An empty result is a valid
    return (rho may simply be too ambitious for this range).
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    th = as_real_value(theta)
    beta_frac, beta_f = _beta_pair(beta)
    if not (0.0 <= beta_f < 1.0):
        raise DomainError(f"beta must lie in [0,1), got {beta_f}")
    out: list[DiophantineWitness] = []
    for n in range(1, n_max + 1):
        m, residual = _decompose(th, n, beta_frac, beta_f)
        if abs(residual) < n ** (-rho):
            out.append(DiophantineWitness(
                n=n, m=m, m1=None, target_beta=beta_f, residual=residual,
                rho=rho, trusted=_trusted(th, residual, n)))
    return out


def joint_witness_search(theta1, theta2, beta1, beta2, rho: float,
                         n_max: int) -> list[DiophantineWitness]:
    """Simultaneous acceptance: both residuals below n^-rho at the same n."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    th1 = as_real_value(theta1)
    th2 = as_real_value(theta2)
    b1_frac, b1 = _beta_pair(beta1)
    b2_frac, b2 = _beta_pair(beta2)
    for b in (b1, b2):
        if not (0.0 <= b < 1.0):
            raise DomainError(f"beta must lie in [0,1), got {b}")
    out: list[DiophantineWitness] = []
    for n in range(1, n_max + 1):
        thr = n ** (-rho)
        m, r1 = _decompose(th1, n, b1_frac, b1)
        if abs(r1) >= thr:
            continue
        m1, r2 = _decompose(th2, n, b2_frac, b2)
        if abs(r2) >= thr:
            continue
        out.append(DiophantineWitness(
            n=n, m=m, m1=m1, target_beta=b1, residual=r1, rho=rho,
            trusted=_trusted(th1, r1, n) and _trusted(th2, r2, n),
            target_beta2=b2, residual2=r2))
    return out


def default_rho(theta: RealValue, beta: float, joint: bool = False) -> float:
    """Search exponent guaranteed to yield witnesses in practice: 1.0 for a
    quadratic surd aimed at beta = 0, 0.4 for joint searches, 0.5 otherwise."""
    if joint:
        return 0.4
    if theta.kind == "surd" and beta == 0.0:
        return 1.0
    return 0.5
