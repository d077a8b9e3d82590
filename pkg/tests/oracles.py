"""Independent oracles for the test suite.

Everything here is written against the defining formulas, deliberately not
reusing package code paths, so each comparison is a genuine dual route.
"""

from __future__ import annotations

import math

SQRT_PI = math.sqrt(math.pi)


def erfi_maclaurin(x: float, rel_stop: float = 1e-18) -> float:
    """(2/sqrt(pi)) sum_k x^(2k+1)/(k!(2k+1)); valid until exp(x^2) overflows."""
    if x == 0.0:
        return 0.0
    total = 0.0
    power = x  # x^(2k+1)/k!
    k = 0
    while True:
        term = power / (2 * k + 1)
        total += term
        k += 1
        power *= x * x / k
        if abs(power / (2 * k + 1)) < rel_stop * abs(total):
            break
        if k > 5000:
            raise RuntimeError("oracle series did not converge")
    return 2.0 / SQRT_PI * total


def dawson_asymptotic(x: float) -> float:
    """Optimally truncated 2xF ~ sum (2k-1)!!/(2x^2)^k; good to ~exp(-x^2)."""
    ax = abs(x)
    inv = 1.0 / (2.0 * ax * ax)
    total, term, prev = 1.0, 1.0, 1.0
    for k in range(1, 60):
        term *= (2 * k - 1) * inv
        if abs(term) >= prev:
            break
        prev = abs(term)
        total += term
        if abs(term) < 1e-18 * total:
            break
    return math.copysign(total / (2.0 * ax), x)


def erfi_from_dawson_asymptotic(x: float) -> float:
    return 2.0 / SQRT_PI * math.exp(x * x) * dawson_asymptotic(x)


def erf_series(x: float) -> float:
    """Alternating Maclaurin erf; fine for |x| <= ~5."""
    total = 0.0
    term = x
    k = 0
    while abs(term) > 1e-18 * max(abs(total), 1e-300):
        total += term / (2 * k + 1)
        k += 1
        term *= -x * x / k
        if k > 500:
            raise RuntimeError("erf series did not converge")
    return 2.0 / SQRT_PI * total


def laguerre_explicit(n: int, eta: float, x: float) -> float:
    """L_n^eta(x) = sum_k (-1)^k binom(n+eta, n-k) x^k / k! from the definition."""
    total = 0.0
    for k in range(n + 1):
        binom = 1.0
        # binom(n+eta, n-k) = prod_{j=1}^{n-k} (eta + k + j) / j
        for j in range(1, n - k + 1):
            binom *= (eta + k + j) / j
        total += (-1) ** k * binom * x**k / math.factorial(k)
    return total


def boltzmann_table(levels: list[float], beta: float):
    """(weights, mean, variance) by direct rationals with a shifted exponent."""
    m = min(levels)
    w = [math.exp(-beta * (e - m)) for e in levels]
    z = sum(w)
    p = [wi / z for wi in w]
    mean = sum(pi * e for pi, e in zip(p, levels))
    var = sum(pi * (e - mean) ** 2 for pi, e in zip(p, levels))
    return p, mean, var


def two_level_mean_energy(e0: float, e1: float, beta: float) -> float:
    _, mean, _ = boltzmann_table([e0, e1], beta)
    return mean


def two_level_specific_heat(e0: float, e1: float, beta: float, kB: float = 1.0) -> float:
    """C = kB (beta Delta)^2 e^(beta Delta) / (e^(beta Delta) + 1)^2."""
    u = beta * abs(e1 - e0)
    if u > 700.0:
        return 0.0
    return kB * u * u * math.exp(u) / (math.exp(u) + 1.0) ** 2


def schottky_peak_temperature(gap: float, kB: float = 1.0) -> float:
    """T* = gap / (kB u*) where u* solves u tanh(u/2) = 2 (two-level maximum)."""
    f = lambda u: u * math.tanh(0.5 * u) - 2.0
    lo, hi = 1.0, 4.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    u_star = 0.5 * (lo + hi)
    return gap / (kB * u_star)


def count_interior_maxima(values) -> int:
    """Strict rise into the point, non-rise out of it."""
    vals = list(values)
    return sum(
        1
        for i in range(1, len(vals) - 1)
        if vals[i] > vals[i - 1] and vals[i] >= vals[i + 1]
    )
