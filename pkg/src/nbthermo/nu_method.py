"""Parametric solver machinery for hypergeometric-type template equations.

Works on the second-order template

    psi'' + (a1 - a2 s)/(s (1 - a3 s)) psi'
          + (-x1 s^2 + x2 s - x3)/(s (1 - a3 s))^2 psi = 0

deriving the full auxiliary parameter set from the six template coefficients,
the two k-branches, the per-branch eigenvalue condition, and the wavefunction
shape (Jacobi family for a3 != 0, associated Laguerre in the a3 -> 0 limit).

Branch quirks kept exactly as the method tables state them, and flagged here
rather than "corrected": the KPlus eigenvalue condition carries a trailing
+a5 that the KMinus one lacks, and the KPlus Jacobi form uses the unstarred
a10 inside its second index while every other slot is starred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

MAX_POLY_DEGREE = 100  # three-term recurrences are only validated this far


class BranchInvalidError(ValueError):
    """A branch needs sqrt(a8) / sqrt(a9) that is complex for these coefficients."""


class NuBranch(Enum):
    K_MINUS = "k_minus"
    K_PLUS = "k_plus"


@dataclass(frozen=True)
class NuCoefficients:
    """The six template coefficients: a1..a3 from the first-derivative part,
    x1..x3 from the numerator polynomial (-x1 s^2 + x2 s - x3)."""

    a1: float
    a2: float
    a3: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "x1", "x2", "x3"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"non-finite template coefficient {name}={v!r}")


@dataclass(frozen=True)
class NuDerived:
    """Derived parameter set.

    a4..a9 and the k pair exist for any real template; a10..a13 and their
    starred twins need real sqrt(a8), sqrt(a9) and are NaN when either is
    negative (use a k-branch gate before touching them).
    """

    a4: float
    a5: float
    a6: float
    a7: float
    a8: float
    a9: float
    k_minus: complex
    k_plus: complex
    a10: float
    a11: float
    a12: float
    a13: float
    a10s: float
    a11s: float
    a12s: float
    a13s: float

    @property
    def k_is_complex(self) -> bool:
        return self.k_minus.imag != 0.0


def derive_parameters(c: NuCoefficients) -> NuDerived:
    """Populate every derived parameter from the six template coefficients."""
    a4 = 0.5 * (1.0 - c.a1)
    a5 = 0.5 * (c.a2 - 2.0 * c.a3)
    a6 = a5 * a5 + c.x1
    a7 = 2.0 * a4 * a5 - c.x2
    a8 = a4 * a4 + c.x3
    a9 = c.a3 * a7 + c.a3 * c.a3 * a8 + a6

    disc = a8 * a9
    if disc >= 0.0:
        root = complex(math.sqrt(disc), 0.0)
    else:
        root = complex(0.0, math.sqrt(-disc))
    k_base = -(a7 + 2.0 * c.a3 * a8)
    k_minus = k_base - 2.0 * root
    k_plus = k_base + 2.0 * root

    if a8 >= 0.0 and a9 >= 0.0:
        s8, s9 = math.sqrt(a8), math.sqrt(a9)
        a10 = c.a1 + 2.0 * a4 + 2.0 * s8
        a11 = c.a2 - 2.0 * a5 + 2.0 * (s9 + c.a3 * s8)
        a12 = a4 + s8
        a13 = a5 - (s9 + c.a3 * s8)
        a10s = c.a1 + 2.0 * a4 - 2.0 * s8
        a11s = c.a2 - 2.0 * a5 + 2.0 * (s9 - c.a3 * s8)
        a12s = a4 - s8
        a13s = a5 - (s9 - c.a3 * s8)
    else:
        a10 = a11 = a12 = a13 = a10s = a11s = a12s = a13s = math.nan

    return NuDerived(
        a4=a4, a5=a5, a6=a6, a7=a7, a8=a8, a9=a9,
        k_minus=k_minus, k_plus=k_plus,
        a10=a10, a11=a11, a12=a12, a13=a13,
        a10s=a10s, a11s=a11s, a12s=a12s, a13s=a13s,
    )


def _branch_roots(c: NuCoefficients, branch: NuBranch, a8: float, a9: float) -> tuple[float, float]:
    """(sqrt(a9) +/- a3 sqrt(a8)) composition for the chosen branch."""
    if a8 < 0.0 or a9 < 0.0:
        raise BranchInvalidError(
            f"{branch.value}: sqrt(a8={a8:g}) or sqrt(a9={a9:g}) is complex"
        )
    s8, s9 = math.sqrt(a8), math.sqrt(a9)
    if branch is NuBranch.K_MINUS:
        return s8, s9
    return -s8, s9  # starred set flips the a3*sqrt(a8) sign


def tau_prime_condition(c: NuCoefficients, d: NuDerived, branch: NuBranch) -> float:
    """Slope of the linearizer tau(s); must be strictly negative for a valid branch.

    KMinus: -2 a3 - 2 (sqrt(a9) + a3 sqrt(a8)); KPlus flips the sqrt(a8) sign
    following the starred parameter set.
    """
    s8, s9 = _branch_roots(c, branch, d.a8, d.a9)
    return -2.0 * c.a3 - 2.0 * (s9 + c.a3 * s8)


def branch_is_valid(c: NuCoefficients, d: NuDerived, branch: NuBranch) -> bool:
    """Strict tau' < 0 gate; the tau' = 0 boundary counts as invalid."""
    try:
        return tau_prime_condition(c, d, branch) < 0.0
    except BranchInvalidError:
        return False


def eigenvalue_residual(c: NuCoefficients, n: int, branch: NuBranch) -> float:
    """Left-hand side of the branch eigenvalue condition; zero at an eigenstate.

    KMinus:  a2 n - (2n+1) a5 + (2n+1)(sqrt(a9) + a3 sqrt(a8)) + n(n-1) a3
             + a7 + 2 a3 a8 + 2 sqrt(a8 a9)
    KPlus:   a2 n - 2 a5 n + (2n+1)(sqrt(a9) - a3 sqrt(a8)) + n(n-1) a3
             + a7 + 2 a3 a8 - 2 sqrt(a8 a9) + a5   (trailing +a5 as stated)
    """
    if n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    d = derive_parameters(c)
    s8, s9 = _branch_roots(c, branch, d.a8, d.a9)
    cross = math.sqrt(d.a8) * math.sqrt(d.a9)
    if branch is NuBranch.K_MINUS:
        return (
            c.a2 * n
            - (2 * n + 1) * d.a5
            + (2 * n + 1) * (s9 + c.a3 * math.sqrt(d.a8))
            + n * (n - 1) * c.a3
            + d.a7
            + 2.0 * c.a3 * d.a8
            + 2.0 * cross
        )
    return (
        c.a2 * n
        - 2.0 * d.a5 * n
        + (2 * n + 1) * (s9 - c.a3 * math.sqrt(d.a8))
        + n * (n - 1) * c.a3
        + d.a7
        + 2.0 * c.a3 * d.a8
        - 2.0 * cross
        + d.a5
    )


# =============================================================================
# Wavefunction descriptors and evaluation
# =============================================================================

@dataclass(frozen=True)
class WavefunctionForm:
    """Symbolic shape of an (unnormalized) template eigenfunction.

    laguerre family (a3 == 0):  s^s_power * exp(exp_coefficient * s)
                                * L_n^(poly_index)(poly_scale * s)
    jacobi family  (a3 != 0):   s^s_power * (1 - a3 s)^one_minus_power
                                * P_n^(jacobi_p, jacobi_q)(1 - 2 a3 s)
    """

    family: str  # "laguerre" | "jacobi"
    degree: int
    a3: float
    s_power: float
    exp_coefficient: float = 0.0
    poly_index: float = 0.0
    poly_scale: float = 0.0
    one_minus_power: float = 0.0
    jacobi_p: float = 0.0
    jacobi_q: float = 0.0


def wavefunction_descriptor(
    c: NuCoefficients, d: NuDerived, n: int, branch: NuBranch
) -> WavefunctionForm:
    """Exponent/polynomial descriptor for the branch eigenfunction of degree n."""
    if n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    if n > MAX_POLY_DEGREE:
        raise ValueError(f"polynomial degree {n} exceeds supported maximum {MAX_POLY_DEGREE}")
    _branch_roots(c, branch, d.a8, d.a9)  # validity gate
    if branch is NuBranch.K_MINUS:
        a10, a11, a12, a13 = d.a10, d.a11, d.a12, d.a13
    else:
        a10, a11, a12, a13 = d.a10s, d.a11s, d.a12s, d.a13s
    if c.a3 == 0.0:
        return WavefunctionForm(
            family="laguerre", degree=n, a3=0.0,
            s_power=a12, exp_coefficient=a13,
            poly_index=a10 - 1.0, poly_scale=a11,
        )
    # second Jacobi index uses the unstarred a10 on both branches, as stated
    return WavefunctionForm(
        family="jacobi", degree=n, a3=c.a3,
        s_power=a12, one_minus_power=-a12 - a13 / c.a3,
        jacobi_p=a10 - 1.0, jacobi_q=d.a11 / c.a3 - d.a10 - 1.0
        if branch is NuBranch.K_MINUS
        else d.a11s / c.a3 - d.a10 - 1.0,
    )


def laguerre_polynomial(n: int, eta: float, x: float) -> float:
    """Associated Laguerre L_n^eta(x) by the standard three-term recurrence."""
    if n < 0 or n > MAX_POLY_DEGREE:
        raise ValueError(f"degree {n} outside supported range 0..{MAX_POLY_DEGREE}")
    if n == 0:
        return 1.0
    if n == 1:
        return 1.0 + eta - x
    prev, cur = 1.0, 1.0 + eta - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + eta - x) * cur - (k + eta) * prev) / (k + 1)
    return cur


def jacobi_polynomial(n: int, p: float, q: float, z: float) -> float:
    """Jacobi P_n^(p, q)(z) by the standard three-term recurrence."""
    if n < 0 or n > MAX_POLY_DEGREE:
        raise ValueError(f"degree {n} outside supported range 0..{MAX_POLY_DEGREE}")
    if n == 0:
        return 1.0
    if n == 1:
        return 0.5 * (p - q) + 0.5 * (p + q + 2.0) * z
    prev, cur = 1.0, 0.5 * (p - q) + 0.5 * (p + q + 2.0) * z
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + p + q) * (2.0 * k + p + q - 2.0)
        if c1 == 0.0:
            raise ValueError(f"degenerate Jacobi recurrence at degree {k} for indices ({p}, {q})")
        c2 = (2.0 * k + p + q - 1.0) * (p * p - q * q)
        c3 = (2.0 * k + p + q - 2.0) * (2.0 * k + p + q - 1.0) * (2.0 * k + p + q)
        c4 = 2.0 * (k + p - 1.0) * (k + q - 1.0) * (2.0 * k + p + q)
        prev, cur = cur, ((c2 + c3 * z) * cur - c4 * prev) / c1
    return cur


def evaluate_wavefunction(form: WavefunctionForm, s: float) -> float:
    """Numeric value of a WavefunctionForm at the template coordinate s > 0."""
    if not (s > 0.0 and math.isfinite(s)):
        raise ValueError(f"wavefunction argument must satisfy s > 0, got {s!r}")
    if form.family == "laguerre":
        arg = form.exp_coefficient * s
        if arg < -745.0:  # exp underflows; the product is an exact 0 in doubles
            return 0.0
        return (
            math.pow(s, form.s_power)
            * math.exp(arg)
            * laguerre_polynomial(form.degree, form.poly_index, form.poly_scale * s)
        )
    u = form.a3 * s
    if not (0.0 < u < 1.0):
        raise ValueError(f"jacobi form needs 0 < a3*s < 1, got a3*s = {u!r}")
    # (1 - a3 s)^power via log1p keeps the a3 -> 0 limit smooth
    return (
        math.pow(s, form.s_power)
        * math.exp(form.one_minus_power * math.log1p(-u))
        * jacobi_polynomial(form.degree, form.jacobi_p, form.jacobi_q, 1.0 - 2.0 * u)
    )


# =============================================================================
# Root finding for energy-dependent coefficients
# =============================================================================

def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    residual_tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of a continuous scalar f on a caller-supplied bracket [lo, hi].

    Bisection keeps the bracket valid; a secant proposal is taken whenever it
    lands strictly inside.  Stops when |f| <= residual_tol (absolute) or the
    bracket collapses to floating-point resolution.
    """
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(
            f"bracket does not straddle a root: f({lo})={flo:g}, f({hi})={fhi:g}"
        )
    x, fx = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(max_iter):
        if abs(fx) <= residual_tol:
            return x
        secant = None
        if fhi != flo:
            cand = hi - fhi * (hi - lo) / (fhi - flo)
            if lo < cand < hi:
                secant = cand
        x = secant if secant is not None else 0.5 * (lo + hi)
        fx = f(x)
        if fx == 0.0:
            return x
        if flo * fx < 0.0:
            hi, fhi = x, fx
        else:
            lo, flo = x, fx
        if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            return x if abs(fx) <= min(abs(flo), abs(fhi)) else (lo if abs(flo) < abs(fhi) else hi)
    raise ArithmeticError(
        f"root finder did not reach |residual| <= {residual_tol:g} in {max_iter} iterations"
    )
