"""Thermodynamics on top of the partition function, in two modes.

Standard mode applies the textbook definitions to ln Q:

    U = -d ln Q / d beta          C = dU/dT = k_B beta^2 (-dU/dbeta)
    F = -k_B T ln Q               S = k_B ln Q + U/T
    M = -dF/dB0                   chi = -d^2 F / dB0^2

Paper-literal mode preserves printed expressions that are dimensionally
inconsistent with the standard ones (C without the k_B beta^2 factor, S with
a leading T, chi differentiated in beta through the Lambda ratio form) for
reproduction and audit; nothing asserts the two modes agree, and the audit
writer records their relative deviations point by point.

Derivative kernels: for the exact-sum method the Boltzmann moments are
computed directly (two-pass shifted weights), which is what lets a frozen
two-level system report C ~ 1e-19 instead of finite-difference noise; the
quadrature/closed methods use central differences with one Richardson level
for first derivatives (relative step 1e-6) and a plain second difference
(relative step 1e-4).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .partition import QMethod, log_partition
from .special import (
    LOG_ZERO,
    SQRT_PI,
    ErfiScaled,
    LogSigned,
    erfi_scaled,
    log_signed_sum,
)
from .spectrum import PhysicalSystem, levels_array, spectrum_params


class Mode(Enum):
    STANDARD = "standard"
    PAPER_LITERAL = "paper"


class SingularityError(ArithmeticError):
    """A literal-expression denominator evaluated to zero."""


@dataclass(frozen=True)
class ThermoPoint:
    """One temperature row; error holds the failure message for a NaN row."""

    temperature: float
    beta: float
    u: float
    c_heat: float
    f: float
    s: float
    m: float
    chi: float
    mode: Mode
    q_method: QMethod
    error: str | None = None


@dataclass(frozen=True)
class LambdaSet:
    """The printed auxiliary quantities behind the literal U and chi forms.

    Values are plain floats and may be +/-inf when the printed exponentials
    overflow; the ratio evaluators work from the log-domain representation
    instead, so literal U and chi stay finite wherever they are finite
    mathematically.
    """

    l1: float
    l2: float
    l3: float
    l4: float
    l5: float
    l6: float
    y1: float
    y2: float
    y3: float
    y4: float
    d1: float
    d2: float
    d3: float
    d4: float
    d5: float


def ln_q(
    sys: PhysicalSystem,
    beta: float,
    n_cutoff: int,
    q_method: QMethod,
    shift: float = 0.0,
) -> float:
    """log of the chosen partition function; finite for any valid input."""
    return log_partition(sys, beta, n_cutoff, q_method, shift)


# =============================================================================
# Derivative kernels
# =============================================================================

def _fd_step(beta: float) -> float:
    h = max(1e-6, 1e-6 * beta)
    return min(h, 0.5 * beta)  # keep beta - h positive


def mean_energy_numeric(
    sys: PhysicalSystem,
    beta: float,
    n_cutoff: int,
    q_method: QMethod,
    shift: float = 0.0,
) -> float:
    """U = -d ln Q/d beta by central difference with one Richardson level."""
    h = _fd_step(beta)
    if h <= 0.0 or beta - h <= 0.0:
        raise ValueError(f"finite-difference step underflow at beta={beta!r}")

    def d(step: float) -> float:
        return (
            ln_q(sys, beta - step, n_cutoff, q_method, shift)
            - ln_q(sys, beta + step, n_cutoff, q_method, shift)
        ) / (2.0 * step)

    return (4.0 * d(0.5 * h) - d(h)) / 3.0


def _exact_moments(sys: PhysicalSystem, beta: float, n_cutoff: int, shift: float):
    """Boltzmann weights and the first two central moments of the level energies."""
    energies = levels_array(sys, n_cutoff) + shift
    w = np.exp(-beta * (energies - energies.min()))
    w /= w.sum()
    mean = float(np.dot(w, energies))
    var = float(np.dot(w, (energies - mean) ** 2))
    return energies, w, mean, var


def _u_kernel(sys, beta, n_cutoff, q_method, shift) -> float:
    if q_method is QMethod.EXACT:
        return _exact_moments(sys, beta, n_cutoff, shift)[2]
    return mean_energy_numeric(sys, beta, n_cutoff, q_method, shift)


def _minus_du_dbeta_kernel(sys, beta, n_cutoff, q_method, shift) -> float:
    """-dU/dbeta = d^2 ln Q / d beta^2; exact variance for the exact sum."""
    if q_method is QMethod.EXACT:
        return _exact_moments(sys, beta, n_cutoff, shift)[3]
    h = max(1e-4 * beta, 1e-12)
    lq = lambda b: ln_q(sys, b, n_cutoff, q_method, shift)
    return (lq(beta + h) - 2.0 * lq(beta) + lq(beta - h)) / (h * h)


def _level_b0_slopes(sys: PhysicalSystem, n_cutoff: int) -> np.ndarray:
    """dE'_n/dB0 = C0 (n+1/2) dC1/dB0; the levels are linear in B0."""
    p = spectrum_params(sys)
    dc1_db0 = -2.0 * sys.charge / (sys.alpha**2 * sys.hbar * sys.c_light)
    return p.c0 * (np.arange(n_cutoff + 1, dtype=float) + 0.5) * dc1_db0


# =============================================================================
# Standard-mode quantities
# =============================================================================

def specific_heat(
    sys: PhysicalSystem,
    beta: float,
    n_cutoff: int,
    q_method: QMethod,
    mode: Mode = Mode.STANDARD,
    shift: float = 0.0,
) -> float:
    """Standard: dU/dT = k_B beta^2 (-dU/dbeta); paper-literal: -dU/dbeta."""
    mdu = _minus_du_dbeta_kernel(sys, beta, n_cutoff, q_method, shift)
    if mode is Mode.PAPER_LITERAL:
        return mdu
    return sys.kB * beta * beta * mdu


def free_energy(
    sys: PhysicalSystem,
    temperature: float,
    n_cutoff: int,
    q_method: QMethod,
    shift: float = 0.0,
) -> float:
    """F = -k_B T ln Q."""
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    beta = 1.0 / (sys.kB * temperature)
    return -sys.kB * temperature * ln_q(sys, beta, n_cutoff, q_method, shift)


def entropy(
    sys: PhysicalSystem,
    temperature: float,
    n_cutoff: int,
    q_method: QMethod,
    mode: Mode = Mode.STANDARD,
    shift: float = 0.0,
) -> float:
    """Standard: S = k_B ln Q + U/T (so U - F = T S identically).

    Paper-literal keeps the printed leading T: S = k_B T ln Q + k_B beta U.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    beta = 1.0 / (sys.kB * temperature)
    lq = ln_q(sys, beta, n_cutoff, q_method, shift)
    u = _u_kernel(sys, beta, n_cutoff, q_method, shift)
    if mode is Mode.PAPER_LITERAL:
        return sys.kB * temperature * lq + sys.kB * beta * u
    return sys.kB * lq + u / temperature


def magnetization(
    sys: PhysicalSystem,
    temperature: float,
    n_cutoff: int,
    q_method: QMethod,
    shift: float = 0.0,
) -> float:
    """M = -dF/dB0 at fixed level count.

    Exact-sum route: M = -<dE/dB0> (the levels are linear in B0); the other
    methods use a central difference with h = max(1e-6, 1e-6 |B0|).
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    beta = 1.0 / (sys.kB * temperature)
    if q_method is QMethod.EXACT:
        _, w, _, _ = _exact_moments(sys, beta, n_cutoff, shift)
        return -float(np.dot(w, _level_b0_slopes(sys, n_cutoff)))
    h = max(1e-6, 1e-6 * abs(sys.b0))
    fp = free_energy(replace(sys, b0=sys.b0 + h), temperature, n_cutoff, q_method, shift)
    fm = free_energy(replace(sys, b0=sys.b0 - h), temperature, n_cutoff, q_method, shift)
    return -(fp - fm) / (2.0 * h)


def susceptibility(
    sys: PhysicalSystem,
    temperature: float,
    n_cutoff: int,
    q_method: QMethod,
    mode: Mode = Mode.STANDARD,
    shift: float = 0.0,
) -> float:
    """Standard: chi = -d^2 F/dB0^2 at fixed level count.

    The exact-sum route uses chi = beta Var(dE/dB0), identical to the field
    second derivative because d^2 E_n/dB0^2 = 0 for these levels; the other
    methods take a plain second difference with h = max(1e-4, 1e-4 |B0|).
    Paper-literal mode evaluates the printed ratio form -L3/L4 + (L5/L6)^2.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    beta = 1.0 / (sys.kB * temperature)
    if mode is Mode.PAPER_LITERAL:
        return susceptibility_analytic(sys, beta, n_cutoff)
    if q_method is QMethod.EXACT:
        _, w, _, _ = _exact_moments(sys, beta, n_cutoff, shift)
        g = _level_b0_slopes(sys, n_cutoff)
        gbar = float(np.dot(w, g))
        return beta * float(np.dot(w, (g - gbar) ** 2))
    h = max(1e-4, 1e-4 * abs(sys.b0))
    f0 = free_energy(sys, temperature, n_cutoff, q_method, shift)
    fp = free_energy(replace(sys, b0=sys.b0 + h), temperature, n_cutoff, q_method, shift)
    fm = free_energy(replace(sys, b0=sys.b0 - h), temperature, n_cutoff, q_method, shift)
    return -(fp - 2.0 * f0 + fm) / (h * h)


# =============================================================================
# Paper-literal Lambda / Upsilon machinery
# =============================================================================

def _ls(es: ErfiScaled) -> LogSigned:
    return LogSigned.from_log(es.log_magnitude, es.sign)


def _y_diff(y_hi: ErfiScaled, y_lo: ErfiScaled) -> LogSigned:
    """Upsilon difference in signed log space; exact cancellation -> zero."""
    neg = _ls(y_lo)
    return log_signed_sum([_ls(y_hi), LogSigned(-neg.sign, neg.log_abs)])


def _lambda12(sys: PhysicalSystem, beta: float, n_cutoff: int):
    """Signed-log Lambda1, Lambda2 and the scaled Upsilon pair, as printed.

    Sign quirks are preserved verbatim: Lambda1 carries exp(+bc C1^2/2) and
    exp(+bc D1^2/2) against exp(-bc D2^2/2), Lambda2 exp(-bc C1^2/4).
    """
    p = spectrum_params(sys)
    c0, c1 = p.c0, p.c1
    bc = beta * c0
    nn = 2 * n_cutoff + 3
    d1 = 2 * n_cutoff + c1 + 3.0
    d2 = c1 + 1.0
    tau = math.sqrt(0.5 * bc)
    y1 = erfi_scaled(tau * d1)
    y2 = erfi_scaled(tau * d2)
    ydiff = _y_diff(y1, y2)
    sq2bc = math.sqrt(2.0 * bc)

    t1 = LogSigned.from_value(0.25 * c0 * nn * (c1 + d1)).exp_scaled(-0.5 * bc * nn * (c1 + d1))
    t2 = LogSigned.from_value(0.125 * c0 * (c1 + d2)).exp_scaled(-0.25 * bc * (c1 + d2))
    t3 = (
        LogSigned.from_value(-0.25 * SQRT_PI * c0 * c1 * c1 / sq2bc)
        .exp_scaled(0.5 * bc * c1 * c1)
        .times(ydiff)
    )
    inner1 = 0.5 * c0 * d1 / math.sqrt(bc) - 0.25 * beta * c0 * c0 * d1 / bc**1.5
    inner2 = 0.5 * c0 * d2 / math.sqrt(bc) - 0.25 * beta * c0 * c0 * d2 / bc**1.5
    t4 = LogSigned.from_value(-inner1 / sq2bc).exp_scaled(0.5 * bc * c1 * c1 + 0.5 * bc * d1 * d1)
    t5 = LogSigned.from_value(inner2 / sq2bc).exp_scaled(0.5 * bc * c1 * c1 - 0.5 * bc * d2 * d2)
    t6 = (
        LogSigned.from_value(-0.25 * math.sqrt(math.pi / (2.0 * bc**3)) * c0 / sq2bc)
        .exp_scaled(0.5 * bc * c1 * c1)
        .times(ydiff)
    )
    lam1 = log_signed_sum([t1, t2, t3, t4, t5, t6])

    s1 = LogSigned.from_value(0.5).exp_scaled(-0.5 * bc * nn * (c1 + d1))
    s2 = LogSigned.from_value(0.5).exp_scaled(-0.25 * bc * (c1 + d2))
    s3 = (
        LogSigned.from_value(0.5 * SQRT_PI / sq2bc)
        .exp_scaled(-0.25 * bc * c1 * c1)
        .times(ydiff)
    )
    lam2 = log_signed_sum([s1, s2, s3])
    return lam1, lam2, y1, y2, d1, d2


def _lambda3456(sys: PhysicalSystem, beta: float, n_cutoff: int):
    """Signed-log Lambda3..Lambda6 and the second Upsilon pair, as printed.

    Printed oddities preserved: Lambda4's (2N+3)(N+C1) exponent, Lambda5's
    exp(D1 D2^2 / 4) term, and D5's B0/D2 coupling.
    """
    p = spectrum_params(sys)
    c1 = p.c1
    if sys.charge == 0.0:
        raise SingularityError("D4 = hbar c alpha / e is undefined for charge = 0")
    nn = 2 * n_cutoff + 3
    d1 = 2 * n_cutoff + c1 + 3.0
    d2 = c1 + 1.0
    if d2 == 0.0:
        raise SingularityError("D5 divides by D2 = C1 + 1 = 0")
    d3 = sys.hbar**2 * sys.alpha**2 * beta / sys.mass
    d4 = sys.hbar * sys.c_light * sys.alpha / sys.charge
    d5 = (sys.hbar**2 * beta / sys.mass) * (sys.ky - sys.b0 / d2) ** 2
    al = sys.alpha

    y3 = erfi_scaled(0.5 * d1 * math.sqrt(d3))
    y4 = erfi_scaled(0.5 * d2 * math.sqrt(d3))
    ydiff = _y_diff(y3, y4)

    e_a = -0.25 * d3 * nn * (c1 + d1)
    e_b = -0.125 * d3 * (c1 + d2)

    lam3 = log_signed_sum([
        LogSigned.from_value(d3 * nn**4 / (2.0 * d4 * d4 * al * al)).exp_scaled(e_a),
        LogSigned.from_value(d3 * d3 / (8.0 * d4 * d4 * al * al)).exp_scaled(e_b),
        LogSigned.from_value(math.sqrt(math.pi * d3) / (d4 * d4 * al * al))
        .exp_scaled(d5).times(ydiff),
        LogSigned.from_value(-SQRT_PI * c1 * c1 * d3**1.5 / (2.0 * d4 * d4 * al**6))
        .exp_scaled(d5).times(ydiff),
    ])
    lam4 = log_signed_sum([
        LogSigned.from_value(0.5 * beta).exp_scaled(e_b),
        LogSigned.from_value(0.5 * beta).exp_scaled(-0.5 * d3 * nn * (n_cutoff + c1)),
        LogSigned.from_value(0.5 * beta * SQRT_PI / d3).exp_scaled(d5).times(ydiff),
    ])
    pref5 = 1.0 / (2.0 * d4 * al)
    lam5 = log_signed_sum([
        LogSigned.from_value(pref5 * 0.5 * d3).exp_scaled(e_b),
        LogSigned.from_value(pref5 * d3 * nn).exp_scaled(e_a),
        LogSigned.from_value(-pref5 * math.sqrt(math.pi * d3) * c1).exp_scaled(d5).times(ydiff),
        LogSigned.from_value(2.0 * pref5).exp_scaled(d5 + 0.25 * d1 * d2 * d2),
        LogSigned.from_value(-2.0 * pref5).exp_scaled(d5 + 0.25 * d3 * d1 * d1),
    ])
    lam6 = log_signed_sum([
        LogSigned.from_value(0.5 * beta).exp_scaled(e_a),
        LogSigned.from_value(0.5 * beta).exp_scaled(e_b),
        LogSigned.from_value(0.5 * beta * SQRT_PI / d3).exp_scaled(d5).times(ydiff),
    ])
    return lam3, lam4, lam5, lam6, y3, y4, d3, d4, d5


def lambda_set(sys: PhysicalSystem, beta: float, n_cutoff: int) -> LambdaSet:
    """All printed auxiliary quantities at (sys, beta, N) as plain floats."""
    lam1, lam2, y1, y2, d1, d2 = _lambda12(sys, beta, n_cutoff)
    lam3, lam4, lam5, lam6, y3, y4, d3, d4, d5 = _lambda3456(sys, beta, n_cutoff)
    return LambdaSet(
        l1=lam1.value(), l2=lam2.value(), l3=lam3.value(),
        l4=lam4.value(), l5=lam5.value(), l6=lam6.value(),
        y1=y1.value(), y2=y2.value(), y3=y3.value(), y4=y4.value(),
        d1=d1, d2=d2, d3=d3, d4=d4, d5=d5,
    )


def mean_energy_analytic(sys: PhysicalSystem, beta: float, n_cutoff: int) -> float:
    """Literal ratio Lambda1/Lambda2, assembled in signed log space."""
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    lam1, lam2, *_ = _lambda12(sys, beta, n_cutoff)
    if lam2.sign == 0:
        raise SingularityError("Lambda2 evaluated to zero")
    if lam1.sign == 0:
        return 0.0
    ratio = lam1.log_abs - lam2.log_abs
    sign = lam1.sign * lam2.sign
    try:
        return sign * math.exp(ratio)
    except OverflowError:
        return sign * math.inf


def susceptibility_analytic(sys: PhysicalSystem, beta: float, n_cutoff: int) -> float:
    """Literal chi = -Lambda3/Lambda4 + (Lambda5/Lambda6)^2 in signed log space."""
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta!r}")
    lam3, lam4, lam5, lam6, *_ = _lambda3456(sys, beta, n_cutoff)
    if lam4.sign == 0 or lam6.sign == 0:
        raise SingularityError("Lambda4 or Lambda6 evaluated to zero")
    terms = []
    if lam3.sign != 0:
        terms.append(LogSigned(-lam3.sign * lam4.sign, lam3.log_abs - lam4.log_abs))
    if lam5.sign != 0:
        terms.append(LogSigned(1, 2.0 * (lam5.log_abs - lam6.log_abs)))
    return log_signed_sum(terms).value()


# =============================================================================
# Sweeps and the standard-vs-literal audit artifact
# =============================================================================

def evaluate_point(
    sys: PhysicalSystem,
    temperature: float,
    n_cutoff: int,
    q_method: QMethod,
    mode: Mode = Mode.STANDARD,
    shift: float = 0.0,
) -> ThermoPoint:
    """All thermodynamic quantities at one temperature."""
    beta = 1.0 / (sys.kB * temperature)
    if mode is Mode.STANDARD:
        lq = ln_q(sys, beta, n_cutoff, q_method, shift)
        u = _u_kernel(sys, beta, n_cutoff, q_method, shift)
        f = -sys.kB * temperature * lq
        s = sys.kB * lq + u / temperature
        c = specific_heat(sys, beta, n_cutoff, q_method, Mode.STANDARD, shift)
    else:
        u = mean_energy_analytic(sys, beta, n_cutoff)
        f = free_energy(sys, temperature, n_cutoff, q_method, shift)
        s = entropy(sys, temperature, n_cutoff, q_method, Mode.PAPER_LITERAL, shift)
        c = specific_heat(sys, beta, n_cutoff, q_method, Mode.PAPER_LITERAL, shift)
    m = magnetization(sys, temperature, n_cutoff, q_method, shift)
    chi = susceptibility(sys, temperature, n_cutoff, q_method, mode, shift)
    return ThermoPoint(
        temperature=temperature, beta=beta, u=u, c_heat=c, f=f, s=s, m=m, chi=chi,
        mode=mode, q_method=q_method,
    )


def sweep(
    sys: PhysicalSystem,
    t_grid: Sequence[float],
    n_cutoff: int,
    q_method: QMethod,
    mode: Mode = Mode.STANDARD,
    shift: float = 0.0,
) -> list[ThermoPoint]:
    """One ThermoPoint per grid temperature; failures become NaN rows.

    The grid must be strictly increasing and positive.  A failing point is
    recorded with its error message and the sweep continues.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ValueError("t_grid must not be empty")
    if any(t <= 0.0 for t in ts):
        raise ValueError("t_grid temperatures must be positive")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t_grid must be strictly increasing")
    return [safe_point(sys, t, n_cutoff, q_method, mode, shift) for t in ts]


def safe_point(
    sys: PhysicalSystem,
    temperature: float,
    n_cutoff: int,
    q_method: QMethod,
    mode: Mode = Mode.STANDARD,
    shift: float = 0.0,
) -> ThermoPoint:
    """evaluate_point with per-point failures turned into NaN rows."""
    try:
        return evaluate_point(sys, temperature, n_cutoff, q_method, mode, shift)
    except Exception as exc:
        nan = math.nan
        return ThermoPoint(
            temperature=temperature, beta=1.0 / (sys.kB * temperature),
            u=nan, c_heat=nan, f=nan, s=nan, m=nan, chi=nan,
            mode=mode, q_method=q_method,
            error=f"{type(exc).__name__}: {exc}",
        )


AUDIT_HEADER = ("T", "beta", "quantity", "standard_value", "paper_literal_value", "rel_dev")


def write_audit(
    sys: PhysicalSystem,
    t_grid: Sequence[float],
    n_cutoff: int,
    path: str | Path,
    q_method: QMethod = QMethod.CLOSED,
) -> Path:
    """Standard-vs-literal deviation table, one row per quantity per point.

    The standard side differentiates the chosen ln Q numerically; the literal
    side evaluates the printed forms.  Deviations are recorded, not judged.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    for t in t_grid:
        t = float(t)
        beta = 1.0 / (sys.kB * t)
        pairs = {
            "U": (
                mean_energy_numeric(sys, beta, n_cutoff, q_method),
                mean_energy_analytic(sys, beta, n_cutoff),
            ),
            "C": (
                specific_heat(sys, beta, n_cutoff, q_method, Mode.STANDARD),
                specific_heat(sys, beta, n_cutoff, q_method, Mode.PAPER_LITERAL),
            ),
            "S": (
                entropy(sys, t, n_cutoff, q_method, Mode.STANDARD),
                entropy(sys, t, n_cutoff, q_method, Mode.PAPER_LITERAL),
            ),
            "chi": (
                susceptibility(sys, t, n_cutoff, q_method, Mode.STANDARD),
                susceptibility(sys, t, n_cutoff, q_method, Mode.PAPER_LITERAL),
            ),
        }
        for name, (std, lit) in pairs.items():
            denom = abs(std) if abs(std) > 0.0 else math.inf
            rows.append((t, beta, name, std, lit, abs(lit - std) / denom))
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AUDIT_HEADER)
        for t, beta, name, std, lit, dev in rows:
            writer.writerow([f"{t:.17g}", f"{beta:.17g}", name,
                             f"{std:.17g}", f"{lit:.17g}", f"{dev:.17g}"])
    return path
