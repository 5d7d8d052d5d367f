"""Scaled q-Laguerre polynomial evaluation.

Three routes to the same polynomial, each owning a regime:

* ``laguerre_direct`` - the defining degree-n sum at an explicit argument,
  range-guarded because its terms overflow doubles quickly;
* ``normalized_laguerre`` - the reversed normalized sum
  L_n(x_n)/((-z q^a)^n q^(n^2(1-s))), whose terms stay tame for tau >= 0;
* ``split_sums`` - the two theta-normalized half sums used when
  -2 < tau < 0, where the reversed sum's terms span hundreds of decades and
  the natural normalization is the bilateral theta scale.

Every sum is generated termwise in log-polar form, with consecutive-term
Pochhammer updates served from saturating log tables, and reduced by
rescaled compensated summation.  Fractional parts of n*tau and n*theta come
from the exact RealValue reduction, so phases stay accurate at degrees
where n*theta itself has outgrown double resolution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .diophantine import RealValue, as_real_value, chi
from .numerics import (
    DomainError,
    LogPolarComplex,
    RangeGuardError,
    lp,
    lp_mul,
    lp_div,
    lp_pow_int,
    phase_mul_int,
    sum_rescaled,
    wrap_phase,
)
from .qseries import QContext, euler_log, poch_table

_TWO_PI = 2.0 * math.pi
# Natural-log headroom for direct evaluation; e^700 is close to the double max.
_DIRECT_GUARD = 700.0


@dataclass(frozen=True)
class ScalingParameter:
    """The scaling exponent s = tau + 2 + i*2*theta*pi/log q.

    tau and theta are declared RealValues (exact rational, quadratic surd,
    or assumption-tagged float); rationality drives regime dispatch and is
    never inferred from a double.
    """

    tau: RealValue
    theta: RealValue

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", as_real_value(self.tau))
        object.__setattr__(self, "theta", as_real_value(self.theta))

    @property
    def sigma(self) -> float:
        return self.tau.value + 2.0

    def t(self, q: float) -> float:
        return 2.0 * self.theta.value * math.pi / math.log(q)

    def s_complex(self, q: float) -> complex:
        return complex(self.sigma, self.t(q))


def scale_point(ctx: QContext, sp: ScalingParameter, n: int) -> LogPolarComplex:
    """x_n(z,s) = z*q^(-n*s) in log-polar form.

    log|x_n| = log|z| - n*sigma*log q and arg x_n = arg z - 2*pi*{n*theta};
    the fractional-part reduction keeps the phase exact for large n.
    """
    if n < 0:
        raise DomainError("degree n must be nonnegative")
    log_mag = math.log(ctx.abs_z) - n * sp.sigma * ctx.log_q
    _, frac = sp.theta.mul_floor_frac(n)
    return lp(log_mag, cmath.phase(ctx.z) - _TWO_PI * frac)


def laguerre_direct(ctx: QContext, n: int, x: complex) -> complex:
    """The degree-n sum with prefactor (q^(a+1);q)_n/(q;q)_n at argument x.

    Raises RangeGuardError when the largest term would leave double range;
    callers should then switch to the normalized or split paths.
    """
    if n < 0:
        raise DomainError("degree n must be nonnegative")
    q, alpha = ctx.q, ctx.alpha
    lq = ctx.log_q
    x = complex(x)
    tq = poch_table(q, q, ctx.max_terms)
    ta = poch_table(q ** (alpha + 1.0), q, ctx.max_terms)
    log_abs_x = math.log(abs(x)) if x != 0 else -math.inf
    ph = wrap_phase(math.pi + cmath.phase(x)) if x != 0 else 0.0

    def term_log(k: int) -> float:
        if k > 0 and x == 0:
            return -math.inf
        return (ta.log(n) - ta.log(k) - tq.log(k) - tq.log(n - k)
                + (k * k + alpha * k) * lq + (k * log_abs_x if k else 0.0))

    if x == 0 or n <= 64:
        peak = max(term_log(k) for k in range(n + 1))
    else:
        vertex = min(n, max(0, round(-(alpha * lq + log_abs_x) / (2 * lq))))
        peak = max(term_log(k) for k in (0, vertex, n))
    if peak >= _DIRECT_GUARD:
        raise RangeGuardError(
            f"direct evaluation at degree {n} needs log-range {peak:.1f}; "
            "use the normalized or split evaluation paths"
        )
    terms = [lp(term_log(k), phase_mul_int(ph, k)) for k in range(n + 1)]
    return sum_rescaled(terms).to_complex()


def _reversed_sum_lp(ctx: QContext, sp: ScalingParameter, n: int) -> LogPolarComplex:
    """Eq-for-equation evaluation of the reversed normalized sum for tau >= 0."""
    q, alpha = ctx.q, ctx.alpha
    lq = ctx.log_q
    tq = poch_table(q, q, ctx.max_terms)
    ta = poch_table(q ** (alpha + 1.0), q, ctx.max_terms)
    tau_n = sp.tau.value * n
    _, d_n = sp.theta.mul_floor_frac(n)
    log_zqa = math.log(ctx.abs_z) + alpha * lq
    base_phase = wrap_phase(math.pi - cmath.phase(ctx.z) + _TWO_PI * d_n)

    terms: list[LogPolarComplex] = []
    max_log = -math.inf
    log_tol = math.log(ctx.tol) - math.log(4.0)
    for k in range(n + 1):
        tl = (ta.log(n) - tq.log(k) - tq.log(n - k) - ta.log(n - k)
              + (k * k + tau_n * k) * lq - k * log_zqa)
        terms.append(lp(tl, phase_mul_int(base_phase, k)))
        max_log = max(max_log, tl)
        ratio = math.exp(min((2 * k + 1 + tau_n) * lq - log_zqa - math.log1p(-q), 700.0))
        if ratio <= 0.5 and tl <= max_log + log_tol:
            break
    return sum_rescaled(terms).to_lp()


def normalized_laguerre(ctx: QContext, sp: ScalingParameter, n: int) -> complex:
    """L_n(x_n(z,s);q) / ((-z q^a)^n q^(n^2 (1-s))) by the reversed sum.

    Only for tau >= 0: in the strip -2 < tau < 0 the reversed sum's terms
    grow like q^(-(tau n)^2/4) and this path silently loses the
    normalization the theory wants, so it refuses and points at
    :func:`split_sums` instead.
    """
    return normalized_laguerre_lp(ctx, sp, n).to_complex()


def normalized_laguerre_lp(ctx: QContext, sp: ScalingParameter, n: int) -> LogPolarComplex:
    if n < 0:
        raise DomainError("degree n must be nonnegative")
    if sp.tau.value < 0.0:
        raise RangeGuardError(
            "the plain reversed sum is refused for tau < 0; evaluate via "
            "split_sums, which carries the theta-regime normalization"
        )
    return _reversed_sum_lp(ctx, sp, n)


@dataclass(frozen=True)
class SplitSumResult:
    """Both theta-normalized half sums plus the decomposition bookkeeping.

    total = s1 + s2 is the polynomial's value in the normalization
    N * (q;q)_inf^2 * (-z q^a e^(-2 pi i d_n))^p / q^(p*(tau*n + p)) with
    p = floor(m/2); m, c_n come from -tau*n = m + c_n and m1, d_n from
    n*theta = m1 + d_n.
    """

    s1: LogPolarComplex
    s2: LogPolarComplex
    total: LogPolarComplex
    m: int
    floor_m_half: int
    c_n: float
    d_n: float
    m1: int


def _log_factor_e(tq, ta, log_euler2, log_an, p: int, n: int, k: int) -> float:
    return log_euler2 + log_an - tq.log(p - k) - tq.log(n - p + k) - ta.log(n - p + k)


def _log_factor_f(tq, ta, log_euler2, log_an, p: int, n: int, k: int) -> float:
    return log_euler2 + log_an - tq.log(p + k) - tq.log(n - p - k) - ta.log(n - p - k)


def factor_e(ctx: QContext, k: int, n: int, m: int) -> float:
    """Pochhammer ratio attached to term k of the reversed lower half sum;
    lies in (0, 1] and tends to 1 as the indices grow."""
    p = m // 2
    if not (0 <= k <= p):
        raise DomainError(f"factor_e needs 0 <= k <= floor(m/2), got k={k}, m={m}")
    if not (0 <= m <= 2 * n):
        raise DomainError(f"factor_e needs 0 <= m <= 2n, got m={m}, n={n}")
    tq = poch_table(ctx.q, ctx.q, ctx.max_terms)
    ta = poch_table(ctx.q ** (ctx.alpha + 1.0), ctx.q, ctx.max_terms)
    return math.exp(_log_factor_e(tq, ta, 2.0 * euler_log(ctx.q, ctx.max_terms),
                                  ta.log(n), p, n, k))


def factor_f(ctx: QContext, k: int, n: int, m: int) -> float:
    """Pochhammer ratio attached to term k of the shifted upper half sum;
    lies in (0, 1] and tends to 1 as the indices grow."""
    p = m // 2
    if not (1 <= k <= n - p):
        raise DomainError(f"factor_f needs 1 <= k <= n - floor(m/2), got k={k}")
    if not (0 <= m <= 2 * n):
        raise DomainError(f"factor_f needs 0 <= m <= 2n, got m={m}, n={n}")
    tq = poch_table(ctx.q, ctx.q, ctx.max_terms)
    ta = poch_table(ctx.q ** (ctx.alpha + 1.0), ctx.q, ctx.max_terms)
    return math.exp(_log_factor_f(tq, ta, 2.0 * euler_log(ctx.q, ctx.max_terms),
                                  ta.log(n), p, n, k))


def split_sums(ctx: QContext, sp: ScalingParameter, n: int,
               decomposition: tuple[int, float] | None = None) -> SplitSumResult:
    """Evaluate the two theta-normalized half sums for -2 < tau < 0.

    The lower half is reversed and the upper half shifted so that both read
    sum_k q^(k^2) w^(+-k) times a Pochhammer factor in (0,1]; their terms are
    bounded, so no further rescaling is needed to stay inside double range.

    ``decomposition`` overrides (m, c_n) with a witness decomposition
    -tau*n = m + c_n; by default m = floor(-tau*n) and c_n = {-tau*n}.  The
    identity behind the split holds for any integer m (only the
    normalization shifts with it), so the override is checked for
    consistency with tau*n rather than for a particular range.
    """
    q, alpha = ctx.q, ctx.alpha
    tau = sp.tau.value
    if not (-2.0 < tau < 0.0):
        raise DomainError(f"split evaluation needs -2 < tau < 0, got tau={tau}")
    if n < 1:
        raise DomainError("split evaluation needs n >= 1")

    if decomposition is None:
        m, c_n = sp.tau.neg().mul_floor_frac(n)
    else:
        m, c_n = decomposition
        slack = abs(-tau * n - (m + c_n))
        if slack > 1e-6 * max(1.0, abs(tau) * n) or abs(c_n) >= 2.0:
            raise DomainError(
                f"decomposition m={m}, c={c_n} is inconsistent with -tau*n={-tau * n}")
    if m < 0 or m > 2 * n:
        raise DomainError(f"decomposition integer m={m} incompatible with n={n}")
    m1, d_n = sp.theta.mul_floor_frac(n)
    p = m // 2
    parity = chi(m)

    lq = ctx.log_q
    tq = poch_table(q, q, ctx.max_terms)
    ta = poch_table(q ** (alpha + 1.0), q, ctx.max_terms)
    log_euler2 = 2.0 * euler_log(q, ctx.max_terms)
    log_an = ta.log(n)
    log_tol = math.log(ctx.tol) - math.log(4.0)

    # w1 = -z q^(a + chi(m) + c_n) e^(-2 pi i d_n); w2 = 1/w1.
    log_w1 = math.log(ctx.abs_z) + (alpha + parity + c_n) * lq
    ph_w1 = wrap_phase(math.pi + cmath.phase(ctx.z) - _TWO_PI * d_n)

    terms1: list[LogPolarComplex] = []
    max_log = -math.inf
    for k in range(p + 1):
        tl = k * k * lq + k * log_w1 + _log_factor_e(tq, ta, log_euler2, log_an, p, n, k)
        terms1.append(lp(tl, phase_mul_int(ph_w1, k)))
        max_log = max(max_log, tl)
        # Pochhammer factors are <= 1, so q^(k^2) |w1|^k majorizes the tail.
        if math.exp(min((2 * k + 1) * lq + log_w1, 700.0)) <= 0.5 \
                and k * k * lq + k * log_w1 <= max_log + log_tol:
            break
    s1 = sum_rescaled(terms1)

    terms2: list[LogPolarComplex] = []
    max_log = -math.inf
    for k in range(1, n - p + 1):
        tl = k * k * lq - k * log_w1 + _log_factor_f(tq, ta, log_euler2, log_an, p, n, k)
        terms2.append(lp(tl, phase_mul_int(ph_w1, -k)))
        max_log = max(max_log, tl)
        if math.exp(min((2 * k + 1) * lq - log_w1, 700.0)) <= 0.5 \
                and k * k * lq - k * log_w1 <= max_log + log_tol:
            break
    s2 = sum_rescaled(terms2)

    total = sum_rescaled(terms1 + terms2)
    return SplitSumResult(s1=s1.to_lp(), s2=s2.to_lp(), total=total.to_lp(),
                          m=m, floor_m_half=p, c_n=c_n, d_n=d_n, m1=m1)


def normalizer_lp(ctx: QContext, sp: ScalingParameter, n: int) -> LogPolarComplex:
    """(-z q^a)^n * q^(n^2 (1-s)) in log-polar form, phases reduced exactly."""
    lq = ctx.log_q
    base = lp(math.log(ctx.abs_z) + ctx.alpha * lq, math.pi + cmath.phase(ctx.z))
    first = lp_pow_int(base, n)
    # q^(n^2 (1-s)) = q^(-n^2 (1+tau)) * e^(-2 pi i theta n^2)
    _, frac = sp.theta.mul_floor_frac(n * n)
    second = lp(-(1.0 + sp.tau.value) * n * n * lq, -_TWO_PI * frac)
    return lp_mul(first, second)


def split_normalizer_lp(ctx: QContext, sp: ScalingParameter, n: int,
                        m: int, c_n: float, d_n: float) -> LogPolarComplex:
    """(q;q)_inf^2 (-z q^a e^(-2 pi i d_n))^p / q^(p(tau n + p)), p = floor(m/2).

    split_sums().total equals normalized_laguerre times this factor."""
    p = m // 2
    lq = ctx.log_q
    base = lp(math.log(ctx.abs_z) + ctx.alpha * lq,
              math.pi + cmath.phase(ctx.z) - _TWO_PI * d_n)
    num = lp_mul(lp(2.0 * euler_log(ctx.q, ctx.max_terms), 0.0), lp_pow_int(base, p))
    # p(tau n + p) = p(p - m) - p*c_n with the integer part exact
    expo = (p * (p - m) - p * c_n) * lq
    return lp_mul(num, lp(-expo, 0.0))


def laguerre_scaled_lp(ctx: QContext, sp: ScalingParameter, n: int) -> LogPolarComplex:
    """L_n at the scaled point x_n(z,s), reconstructed in log-polar form."""
    tau = sp.tau.value
    if tau >= 0.0:
        norm = normalized_laguerre_lp(ctx, sp, n)
    elif tau > -2.0 and n >= 1:
        res = split_sums(ctx, sp, n)
        norm = lp_div(res.total,
                      split_normalizer_lp(ctx, sp, n, res.m, res.c_n, res.d_n))
    else:
        raise RangeGuardError(
            "no overflow-safe path at tau <= -2; only direct evaluation at "
            "small degree applies there"
        )
    return lp_mul(norm, normalizer_lp(ctx, sp, n))
