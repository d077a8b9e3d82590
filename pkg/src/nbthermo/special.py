"""Overflow-safe imaginary error function and Dawson integral.

erfi(x) = (2/sqrt(pi)) * int_0^x exp(t^2) dt grows like exp(x^2)/(x sqrt(pi)),
so a plain double dies just past |x| ~ 26.6.  This module provides the plain
value on the representable range, a log-scaled representation for everything
else, and the Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt that
makes the scaling possible through

    erfi(x) = (2/sqrt(pi)) * exp(x^2) * F(x).

Evaluation regimes for F (and hence erfi):

  |x| < 4    Maclaurin series of erfi; every term is positive for x > 0, so
             there is no cancellation and the sum is good to the last bit.
  4 <= |x| < 8   sampling series F(x) ~ (1/sqrt(pi)) sum_{n odd} exp(-(x-nh)^2)/n
             with h = 0.25; the aliasing error is ~ exp(-(pi/(2h))^2) ~ 7e-18
             uniformly in x, which the plain asymptotic series cannot match
             near x = 4 (its optimal truncation stalls at ~ exp(-x^2)).
  |x| >= 8   asymptotic series 2xF ~ sum_k (2k-1)!!/(2x^2)^k, truncated at the
             smallest term; error ~ exp(-x^2) < 2e-28 there.

The module also houses the signed log-domain arithmetic used to assemble
exponential-times-erfi expressions that overflow in linear space, and stable
log(erfc) / log(erf(a) - erf(b)) helpers.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

SQRT_PI = math.sqrt(math.pi)
TWO_OVER_SQRT_PI = 2.0 / SQRT_PI

# exp(x^2) overflows IEEE doubles past sqrt(log(DBL_MAX))
ERFI_PLAIN_LIMIT = math.sqrt(math.log(sys.float_info.max))

_SAMPLING_H = 0.25
_SAMPLING_HALF_WIDTH = 28.0  # exp(-28^2) is far below double underflow

LOG_ZERO = float("-inf")


class ErfiOverflowError(OverflowError):
    """Plain erfi would overflow; the caller should use erfi_scaled."""


def _erfi_series(x: float) -> float:
    """Maclaurin sum (2/sqrt(pi)) sum_k x^(2k+1) / (k! (2k+1)).

    Converges for every x; usable up to |x| ~ 26.3 where the peak term
    itself overflows.  Terms share the sign of x, so no cancellation.
    """
    if x == 0.0:
        return 0.0
    x2 = x * x
    power = x  # x^(2k+1) / k!
    terms = [x]
    k = 0
    while True:
        k += 1
        power *= x2 / k
        contrib = power / (2 * k + 1)
        terms.append(contrib)
        if abs(contrib) < 1e-17 * abs(terms[0]) and abs(contrib) < abs(terms[-2]):
            break
        if k > 2000:  # unreachable for |x| <= 26.6
            raise RuntimeError("erfi series failed to converge")
    return TWO_OVER_SQRT_PI * math.fsum(terms)


def _dawson_sampling(x: float) -> float:
    """Sampling-series Dawson integral for moderate positive x."""
    n0 = int(round(x / _SAMPLING_H))
    if n0 % 2 == 0:
        n0 += 1
    span = int(_SAMPLING_HALF_WIDTH / _SAMPLING_H) + 2
    if span % 2:
        span += 1
    terms = []
    for n in range(n0 - span, n0 + span + 1, 2):
        if n == 0:
            continue
        d = x - n * _SAMPLING_H
        if abs(d) > _SAMPLING_HALF_WIDTH:
            continue
        terms.append(math.exp(-d * d) / n)
    return math.fsum(terms) / SQRT_PI


def _dawson_asymptotic(x: float) -> float:
    """2xF(x) ~ 1 + 1/(2x^2) + 3/(2x^2)^2 * 3!!... truncated at the smallest term."""
    inv = 1.0 / (2.0 * x * x)
    term = 1.0
    total = 1.0
    prev = 1.0
    for k in range(1, 60):
        term *= (2 * k - 1) * inv
        if abs(term) >= prev:  # divergence onset: optimal truncation reached
            break
        prev = abs(term)
        total += term
        if abs(term) < 1e-17 * total:
            break
    return total / (2.0 * x)


def dawson(x: float) -> float:
    """Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt (odd, bounded)."""
    if not math.isfinite(x):
        raise ValueError(f"dawson: non-finite argument {x!r}")
    ax = abs(x)
    if ax < 4.0:
        val = SQRT_PI / 2.0 * math.exp(-ax * ax) * _erfi_series(ax)
    elif ax < 8.0:
        val = _dawson_sampling(ax)
    else:
        val = _dawson_asymptotic(ax)
    return math.copysign(val, x)


def erfi(x: float) -> float:
    """Imaginary error function (2/sqrt(pi)) int_0^x exp(t^2) dt.

    Odd and strictly increasing.  Raises ErfiOverflowError once exp(x^2)
    is not representable (|x| > ~26.64); use erfi_scaled there.
    """
    if not math.isfinite(x):
        raise ValueError(f"erfi: non-finite argument {x!r}")
    ax = abs(x)
    if ax > ERFI_PLAIN_LIMIT:
        raise ErfiOverflowError(
            f"erfi({x:g}) overflows double precision (|x| <= {ERFI_PLAIN_LIMIT:.2f}); "
            "use erfi_scaled"
        )
    if ax < 4.0:
        return math.copysign(_erfi_series(ax), x)
    val = TWO_OVER_SQRT_PI * math.exp(ax * ax) * dawson(ax)
    return math.copysign(val, x)


@dataclass(frozen=True)
class ErfiScaled:
    """erfi(x) represented as sign * exp(log_magnitude); log_magnitude = -inf at x = 0."""

    x: float
    log_magnitude: float
    sign: int

    def value(self) -> float:
        """Reconstruct the plain value (inf if out of double range)."""
        if self.log_magnitude == LOG_ZERO:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf


def erfi_scaled(x: float) -> ErfiScaled:
    """Log-scaled erfi, exact in log space for any finite x.

    log|erfi(x)| = x^2 + log(2 F(|x|) / sqrt(pi)); F stays in (0, 1/2x..],
    so the only growing piece is the explicit x^2.
    """
    if not math.isfinite(x):
        raise ValueError(f"erfi_scaled: non-finite argument {x!r}")
    if x == 0.0:
        return ErfiScaled(x=x, log_magnitude=LOG_ZERO, sign=1)
    ax = abs(x)
    log_mag = ax * ax + math.log(TWO_OVER_SQRT_PI * dawson(ax))
    return ErfiScaled(x=x, log_magnitude=log_mag, sign=1 if x > 0 else -1)


# =============================================================================
# Signed log-domain arithmetic
# =============================================================================

@dataclass(frozen=True)
class LogSigned:
    """A real number carried as sign * exp(log_abs); immutable."""

    sign: int  # -1, 0, +1
    log_abs: float  # -inf when sign == 0

    @staticmethod
    def zero() -> "LogSigned":
        return LogSigned(0, LOG_ZERO)

    @staticmethod
    def from_value(v: float) -> "LogSigned":
        if v == 0.0:
            return LogSigned.zero()
        return LogSigned(1 if v > 0 else -1, math.log(abs(v)))

    @staticmethod
    def from_log(log_abs: float, sign: int = 1) -> "LogSigned":
        if log_abs == LOG_ZERO or sign == 0:
            return LogSigned.zero()
        return LogSigned(sign, log_abs)

    def times(self, other: "LogSigned") -> "LogSigned":
        if self.sign == 0 or other.sign == 0:
            return LogSigned.zero()
        return LogSigned(self.sign * other.sign, self.log_abs + other.log_abs)

    def scaled(self, factor: float) -> "LogSigned":
        return self.times(LogSigned.from_value(factor))

    def exp_scaled(self, log_factor: float) -> "LogSigned":
        if self.sign == 0:
            return self
        return LogSigned(self.sign, self.log_abs + log_factor)

    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf


def log_signed_sum(terms: list[LogSigned]) -> LogSigned:
    """Signed log-sum-exp: sum of sign*exp(log) terms without leaving log space.

    Positive and negative parts are accumulated separately against the global
    maximum, then combined with log1p so near-cancellation degrades gracefully
    instead of overflowing.
    """
    live = [t for t in terms if t.sign != 0]
    if not live:
        return LogSigned.zero()
    m = max(t.log_abs for t in live)
    pos = math.fsum(math.exp(t.log_abs - m) for t in live if t.sign > 0)
    neg = math.fsum(math.exp(t.log_abs - m) for t in live if t.sign < 0)
    if pos == neg:
        return LogSigned.zero()
    if pos > neg:
        sign, resid = 1, pos - neg
    else:
        sign, resid = -1, neg - pos
    return LogSigned(sign, m + math.log(resid))


def log_sum_exp(logs: list[float]) -> float:
    """log(sum(exp(l))) for all-positive terms given by their logs."""
    live = [l for l in logs if l != LOG_ZERO]
    if not live:
        return LOG_ZERO
    m = max(live)
    if math.isinf(m):
        return m
    return m + math.log(math.fsum(math.exp(l - m) for l in live))


# =============================================================================
# Real error function helpers for the partition closed form
# =============================================================================

def log_erfc(x: float) -> float:
    """log(erfc(x)), finite for arbitrarily large x.

    math.erfc underflows past x ~ 26.5; beyond 25 the asymptotic
    erfc(x) ~ exp(-x^2)/(x sqrt(pi)) * (1 - 1/(2x^2) + 3/(2x^2)^2 ...) is
    already exact to the last bit.
    """
    if x <= 25.0:
        return math.log(math.erfc(x))
    inv = 1.0 / (2.0 * x * x)
    term = 1.0
    total = 1.0
    prev = 1.0
    for k in range(1, 40):
        term *= -(2 * k - 1) * inv
        if abs(term) >= prev:
            break
        prev = abs(term)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return -x * x - math.log(x * SQRT_PI) + math.log(total)


def log_erf_diff(a: float, b: float) -> float:
    """log(erf(a) - erf(b)) for a >= b, stable when both tails saturate.

    Split by sign so the difference is always of two same-order positive
    quantities: straddling zero adds |erf| values, same-sign pairs go through
    erfc where the saturated 1's cancel analytically.
    """
    if a < b:
        raise ValueError("log_erf_diff requires a >= b")
    if a == b:
        return LOG_ZERO
    if b >= 0.0:
        lb, la = log_erfc(b), log_erfc(a)
        return lb + math.log1p(-math.exp(la - lb))
    if a <= 0.0:
        return log_erf_diff(-b, -a)
    return math.log(math.erf(a) + math.erf(-b))
