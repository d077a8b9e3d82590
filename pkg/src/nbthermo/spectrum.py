"""Physics of a charged particle in an exponentially decaying magnetic field.

Field geometry B(x) = B0 exp(-alpha x) zhat with vector potential
A_y(x) = (B0/alpha)(1 - exp(-alpha x)), reduction of the planar problem to
the solver template of nu_method, closed-form energy levels, the level-count
policy for the partition sum, and normalized bound-state profiles.

Level formula:  E'_n = C0 (n + 1/2)(n + 1/2 + C1)  with
C0 = alpha^2 hbar^2 / (2 m), C1 = (2/alpha)(k_y - e B0/(alpha hbar c)).
The E'_n parabola in n has its vertex at n* = -C1/2 - 1/2; the decreasing
limb (n below n*) carries the normalizable states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nu_method import (
    NuBranch,
    NuCoefficients,
    derive_parameters,
    eigenvalue_residual,
    find_root,
    laguerre_polynomial,
    wavefunction_descriptor,
)

TAIL_MASS_LIMIT = 1e-8


class CutoffError(ValueError):
    """The vertex cutoff policy has no natural answer for these parameters."""


class NonNormalizableError(ValueError):
    """The s-exponent sqrt(xi1) is not a positive real for this state."""


class TailMassError(ValueError):
    """The supplied grid does not contain the wavefunction support."""


@dataclass(frozen=True)
class PhysicalSystem:
    """Particle, field and unit-system parameters.

    alpha = 0 (the uniform-field limit) is rejected: the reduced constants
    C0 -> 0, C1 -> -inf degenerate there and no limit is taken.
    """

    mass: float
    charge: float
    b0: float
    alpha: float
    ky: float
    kz: float
    hbar: float
    c_light: float
    kB: float

    def __post_init__(self):
        for name in ("mass", "charge", "b0", "alpha", "ky", "kz", "hbar", "c_light", "kB"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"non-finite system parameter {name}={v!r}")
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be strictly positive, got {self.alpha!r}")
        for name in ("mass", "hbar", "c_light", "kB"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    @staticmethod
    def dimensionless(
        b0: float = 2.5,
        alpha: float = 1.0,
        ky: float = 0.1,
        kz: float = 0.0,
        charge: float = 1.0,
    ) -> "PhysicalSystem":
        """Default unit system hbar = m = e = c = k_B = 1."""
        return PhysicalSystem(
            mass=1.0, charge=charge, b0=b0, alpha=alpha, ky=ky, kz=kz,
            hbar=1.0, c_light=1.0, kB=1.0,
        )

    @property
    def field_coupling(self) -> float:
        """w = e B0 / (alpha hbar c), the inverse-length field scale."""
        return self.charge * self.b0 / (self.alpha * self.hbar * self.c_light)


@dataclass(frozen=True)
class SpectrumParams:
    """Reduced constants of the level formula."""

    c0: float  # alpha^2 hbar^2 / (2 m), energy scale
    c1: float  # (2/alpha)(k_y - w), dimensionless


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    e_plane: float
    e_total: float


def spectrum_params(sys: PhysicalSystem) -> SpectrumParams:
    c0 = sys.alpha**2 * sys.hbar**2 / (2.0 * sys.mass)
    c1 = (2.0 / sys.alpha) * (sys.ky - sys.field_coupling)
    return SpectrumParams(c0=c0, c1=c1)


def vector_potential(sys: PhysicalSystem, x: float) -> float:
    """A_y(x) = (B0/alpha)(1 - exp(-alpha x)); saturates at B0/alpha."""
    return sys.b0 / sys.alpha * -math.expm1(-sys.alpha * x)


def magnetic_field(sys: PhysicalSystem, x: float) -> float:
    """B_z(x) = B0 exp(-alpha x) = dA_y/dx."""
    return sys.b0 * math.exp(-sys.alpha * x)


def reduce_to_template(sys: PhysicalSystem, e_plane: float) -> NuCoefficients:
    """Template coefficients of the planar equation at energy e_plane.

    In s = exp(-alpha x) the planar equation reads

        phi'' + (1/s) phi' + (-xi3 s^2 - xi2 s - xi1)/s^2 phi = 0,

    an a1=1, a2=0, a3=0 template under the positional map
    x1 = xi3, x2 = -xi2, x3 = xi1 (matching powers of s, signs adjusted so
    the two numerators are the same polynomial), with

        xi1 = (2 m E'/hbar^2 + (k_y - w)^2) / alpha^2
        xi2 = (2 w / alpha^2) (k_y - w)
        xi3 = (w / alpha)^2,          w = e B0 / (alpha hbar c).

    The sign layout inside xi1 is pinned by the requirement that the branch
    eigenvalue condition reproduce the closed-form levels of energy_level;
    the resulting eigenfunction shape is
    s^sqrt(xi1) exp(-sqrt(xi3) s) L_n^(2 sqrt(xi1))(2 sqrt(xi3) s).
    """
    if not math.isfinite(e_plane):
        raise ValueError(f"non-finite energy {e_plane!r}")
    w = sys.field_coupling
    a2 = sys.alpha**2
    xi1 = (2.0 * sys.mass * e_plane / sys.hbar**2 + (sys.ky - w) ** 2) / a2
    xi2 = (2.0 * w / a2) * (sys.ky - w)
    xi3 = (w / sys.alpha) ** 2
    return NuCoefficients(a1=1.0, a2=0.0, a3=0.0, x1=xi3, x2=-xi2, x3=xi1)


def energy_level(sys: PhysicalSystem, n: int) -> EnergyLevel:
    """Closed-form level: E'_n = C0 (n+1/2)(n+1/2+C1), plus the free k_z term."""
    if n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    p = spectrum_params(sys)
    e_plane = p.c0 * (n + 0.5) * (n + 0.5 + p.c1)
    e_kz = sys.hbar**2 * sys.kz**2 / (2.0 * sys.mass)
    return EnergyLevel(n=n, e_plane=e_plane, e_total=e_plane + e_kz)


def levels_array(sys: PhysicalSystem, n_cutoff: int) -> np.ndarray:
    """Planar energies E'_0 .. E'_N as an array."""
    if n_cutoff < 0:
        raise ValueError(f"n_cutoff must be non-negative, got {n_cutoff}")
    p = spectrum_params(sys)
    ns = np.arange(n_cutoff + 1, dtype=float) + 0.5
    return p.c0 * ns * (ns + p.c1)


@dataclass(frozen=True)
class CutoffPolicy:
    """Level-count policy: an explicit N, or the vertex of the level parabola.

    The vertex policy returns floor(-C1/2 - 1/2), the last index on the
    decreasing limb, and only applies when C1 < -1; `floor_n` lifts the
    result to a minimum level count (used by figure presets that need at
    least a two-level system).
    """

    kind: str  # "explicit" | "vertex"
    n: int | None = None
    floor_n: int = 0

    @staticmethod
    def explicit(n: int) -> "CutoffPolicy":
        if n < 0:
            raise ValueError(f"explicit cutoff must be non-negative, got {n}")
        return CutoffPolicy(kind="explicit", n=n)

    @staticmethod
    def vertex(floor_n: int = 0) -> "CutoffPolicy":
        return CutoffPolicy(kind="vertex", floor_n=floor_n)


def level_cutoff(sys: PhysicalSystem, policy: CutoffPolicy) -> int:
    """Resolve a cutoff policy to a concrete N."""
    if policy.kind == "explicit":
        return int(policy.n)
    if policy.kind != "vertex":
        raise ValueError(f"unknown cutoff policy kind {policy.kind!r}")
    p = spectrum_params(sys)
    if p.c1 >= -1.0:
        raise CutoffError(
            f"no natural cutoff: the level parabola has no decreasing limb for "
            f"C1 = {p.c1:g} >= -1; use CutoffPolicy.explicit(N)"
        )
    return max(int(math.floor(-p.c1 / 2.0 - 0.5)), policy.floor_n)


def solve_level_energy(
    sys: PhysicalSystem,
    n: int,
    bracket: tuple[float, float] | None = None,
    residual_tol: float = 1e-12,
) -> float:
    """Planar energy of level n found as a root of the eigenvalue residual.

    Independent of energy_level: the residual of the appropriate k-branch
    (KMinus on the decreasing limb 2n+1+C1 < 0, KPlus otherwise) is solved
    in E'.  The default bracket spans from the xi1 >= 0 domain edge upward,
    expanding geometrically until the residual changes sign.
    """
    p = spectrum_params(sys)
    branch = NuBranch.K_MINUS if (2 * n + 1 + p.c1) < 0.0 else NuBranch.K_PLUS

    def residual(e_plane: float) -> float:
        return eigenvalue_residual(reduce_to_template(sys, e_plane), n, branch)

    if bracket is not None:
        lo, hi = bracket
    else:
        domain_edge = -p.c0 * p.c1**2 / 4.0  # xi1 = 0 boundary
        scale = max(abs(domain_edge), p.c0, 1.0)
        lo = domain_edge + 1e-14 * scale
        hi = domain_edge + scale
        f_lo = residual(lo)
        for _ in range(80):
            if f_lo * residual(hi) <= 0.0:
                break
            hi = domain_edge + (hi - domain_edge) * 2.0
        else:
            raise ArithmeticError(f"could not bracket the level-{n} energy root")
    return find_root(residual, lo, hi, residual_tol=residual_tol)


def normalized_wavefunction(sys: PhysicalSystem, n: int, x_grid: np.ndarray) -> np.ndarray:
    """Bound-state profile phi_n sampled on x_grid, trapezoid-normalized to 1.

    The shape is s^sqrt(xi1) exp(-sqrt(xi3) s) L_n^(2 sqrt(xi1))(2 sqrt(xi3) s)
    with s = exp(-alpha x), assembled in log space so the deep tails underflow
    to zero instead of overflowing.  Raises NonNormalizableError when
    xi1 <= 0 at E'_n, and TailMassError when the grid endpoints still carry
    more than TAIL_MASS_LIMIT of the total probability.
    """
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or x.size < 8:
        raise ValueError("x_grid must be a 1-d array with at least 8 points")
    if np.any(np.diff(x) <= 0.0):
        raise ValueError("x_grid must be strictly increasing")

    e_plane = energy_level(sys, n).e_plane
    coeff = reduce_to_template(sys, e_plane)
    xi1, xi3 = coeff.x3, coeff.x1
    if xi1 <= 0.0:
        raise NonNormalizableError(
            f"non-normalizable exponent: xi1 = {xi1:g} <= 0 at level n = {n}"
        )
    sq1, sq3 = math.sqrt(xi1), math.sqrt(xi3)

    log_s = -sys.alpha * x
    s = np.exp(log_s)
    poly = laguerre_polynomial(n, 2.0 * sq1, 2.0 * sq3 * s)
    with np.errstate(divide="ignore", under="ignore"):
        log_mag = sq1 * log_s - sq3 * s + np.log(np.abs(poly))
        phi = np.sign(poly) * np.exp(log_mag)

    density = phi * phi
    norm = np.trapezoid(density, x)
    if not (norm > 0.0 and math.isfinite(norm)):
        raise TailMassError("wavefunction mass is not finite on this grid")
    tail = (density[0] * (x[1] - x[0]) + density[-1] * (x[-1] - x[-2])) / norm
    if tail > TAIL_MASS_LIMIT:
        raise TailMassError(
            f"grid does not contain the support: endpoint mass fraction {tail:.3e} "
            f"> {TAIL_MASS_LIMIT:g}"
        )
    return phi / math.sqrt(norm)


def wavefunction_form(sys: PhysicalSystem, n: int):
    """Descriptor of the level-n eigenfunction in the template coordinate."""
    coeff = reduce_to_template(sys, energy_level(sys, n).e_plane)
    return wavefunction_descriptor(coeff, derive_parameters(coeff), n, NuBranch.K_MINUS)
