import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbthermo.nu_method import NuBranch, eigenvalue_residual
from nbthermo.spectrum import (
    CutoffError,
    CutoffPolicy,
    NonNormalizableError,
    PhysicalSystem,
    TailMassError,
    energy_level,
    level_cutoff,
    levels_array,
    magnetic_field,
    normalized_wavefunction,
    reduce_to_template,
    solve_level_energy,
    spectrum_params,
    vector_potential,
)

from oracles import count_interior_maxima


def test_system_validation():
    with pytest.raises(ValueError, match="alpha"):
        PhysicalSystem.dimensionless(alpha=0.0)
    with pytest.raises(ValueError, match="alpha"):
        PhysicalSystem.dimensionless(alpha=-1.0)
    with pytest.raises(ValueError, match="mass"):
        PhysicalSystem(mass=0.0, charge=1, b0=1, alpha=1, ky=0, kz=0,
                       hbar=1, c_light=1, kB=1)
    with pytest.raises(ValueError, match="ky"):
        PhysicalSystem.dimensionless(ky=math.nan)


def test_default_reduced_constants(default_sys):
    p = spectrum_params(default_sys)
    assert p.c0 == pytest.approx(0.5, rel=1e-15)
    assert p.c1 == pytest.approx(-4.8, rel=1e-15)


# =============================================================================
# field geometry
# =============================================================================

def test_vector_potential_values(default_sys):
    assert vector_potential(default_sys, 0.0) == 0.0
    # asymptote B0/alpha, reached to 1e-12 by alpha*x = 50
    x = 50.0 / default_sys.alpha
    assert vector_potential(default_sys, x) == pytest.approx(
        default_sys.b0 / default_sys.alpha, rel=1e-12
    )
    assert vector_potential(default_sys, 1.0) == pytest.approx(
        2.5 * (1.0 - math.exp(-1.0)), rel=1e-14
    )


def test_magnetic_field_values(default_sys):
    assert magnetic_field(default_sys, 0.0) == default_sys.b0
    sharper = PhysicalSystem.dimensionless(alpha=2.0)
    assert magnetic_field(sharper, 1.0) < magnetic_field(default_sys, 1.0)
    assert magnetic_field(default_sys, 2.0) == pytest.approx(2.5 * math.exp(-2.0), rel=1e-14)


def test_field_is_derivative_of_potential(default_sys):
    h = 1e-5
    for x in np.linspace(0.0, 5.0 / default_sys.alpha, 23):
        fd = (vector_potential(default_sys, x + h) - vector_potential(default_sys, x - h)) / (2 * h)
        assert fd == pytest.approx(magnetic_field(default_sys, float(x)), rel=1e-7)


def test_uniform_limit_is_flat_to_first_order():
    sys = PhysicalSystem.dimensionless(alpha=1e-3)
    for x in (0.1, 1.0, 10.0):  # alpha*x << 1
        rel_drop = abs(magnetic_field(sys, x) - sys.b0) / sys.b0
        assert rel_drop < sys.alpha * x * (1.0 + 1e-6)


# =============================================================================
# template reduction
# =============================================================================

def test_reduce_field_coefficient_is_square(default_sys):
    c = reduce_to_template(default_sys, -1.0)
    assert c.x1 >= 0.0  # xi3 slot
    assert c.x1 == pytest.approx((default_sys.field_coupling / default_sys.alpha) ** 2)


def test_reduce_field_free_limit():
    sys = PhysicalSystem.dimensionless(b0=0.0, ky=0.0, alpha=2.0)
    e = 1.7
    c = reduce_to_template(sys, e)
    assert c.x2 == 0.0  # xi2 vanishes with the field
    assert c.x3 == pytest.approx(2.0 * sys.mass * e / (sys.alpha**2 * sys.hbar**2), rel=1e-14)
    assert c.x1 == 0.0


def test_reduce_back_substitution_residual(default_sys):
    e1 = energy_level(default_sys, 1).e_plane
    c = reduce_to_template(default_sys, e1)
    r = eigenvalue_residual(c, 1, NuBranch.K_MINUS)
    assert abs(r) < 1e-12


# =============================================================================
# closed-form levels
# =============================================================================

def test_energy_level_special_cases():
    # C1 = 0 requires k_y = w
    sys0 = PhysicalSystem.dimensionless(b0=2.5, ky=2.5)
    p = spectrum_params(sys0)
    assert p.c1 == pytest.approx(0.0, abs=1e-15)
    assert energy_level(sys0, 0).e_plane == pytest.approx(p.c0 / 4.0, rel=1e-14)
    # C1 = -1: k_y - w = -alpha/2
    sys1 = PhysicalSystem.dimensionless(b0=0.6, ky=0.1)
    p1 = spectrum_params(sys1)
    assert p1.c1 == pytest.approx(-1.0, rel=1e-14)
    assert energy_level(sys1, 0).e_plane == pytest.approx(-p1.c0 / 4.0, rel=1e-14)


def test_energy_level_default_value(default_sys):
    # 0.5 * 0.5 * (0.5 - 4.8), recomputed by hand
    assert energy_level(default_sys, 0).e_plane == pytest.approx(-1.075, rel=1e-14)
    assert energy_level(default_sys, 1).e_plane == pytest.approx(-2.475, rel=1e-14)


@given(st.floats(min_value=-3.0, max_value=3.0), st.integers(min_value=0, max_value=12))
@settings(max_examples=60)
def test_total_energy_splits_exactly(kz, n):
    # exact up to the single rounding in e_plane + e_kz
    sys = PhysicalSystem.dimensionless(kz=kz)
    lvl = energy_level(sys, n)
    want = sys.hbar**2 * kz**2 / (2.0 * sys.mass)
    tol = 4.0 * math.ulp(max(abs(lvl.e_total), abs(lvl.e_plane), want, 1.0))
    assert abs((lvl.e_total - lvl.e_plane) - want) <= tol


def test_levels_array_matches_scalar(default_sys):
    arr = levels_array(default_sys, 4)
    for n in range(5):
        assert arr[n] == pytest.approx(energy_level(default_sys, n).e_plane, rel=1e-15)


# =============================================================================
# cutoff policy
# =============================================================================

def test_level_cutoff_vertex_default(default_sys):
    assert level_cutoff(default_sys, CutoffPolicy.vertex()) == 1


def test_level_cutoff_explicit(default_sys):
    assert level_cutoff(default_sys, CutoffPolicy.explicit(20)) == 20
    with pytest.raises(ValueError):
        CutoffPolicy.explicit(-1)


def test_level_cutoff_no_natural_cutoff():
    sys = PhysicalSystem.dimensionless(b0=2.5, ky=2.5)  # C1 = 0
    with pytest.raises(CutoffError, match="no natural cutoff"):
        level_cutoff(sys, CutoffPolicy.vertex())


def test_level_cutoff_floor(default_sys):
    weak = PhysicalSystem.dimensionless(b0=1.0)  # C1 = -1.8, vertex N = 0
    assert level_cutoff(weak, CutoffPolicy.vertex()) == 0
    assert level_cutoff(weak, CutoffPolicy.vertex(floor_n=1)) == 1


def test_retained_levels_strictly_decreasing(default_sys):
    # differences share one sign on the retained limb; the next one breaks it
    for sys in (default_sys, PhysicalSystem.dimensionless(b0=5.0)):
        n_top = level_cutoff(sys, CutoffPolicy.vertex())
        levels = levels_array(sys, n_top + 1)
        diffs = np.diff(levels)
        assert all(d < 0.0 for d in diffs[:n_top])
    # for the default system E'_{N+1} > E'_N is False as well
    lv = levels_array(default_sys, 2)
    assert not (lv[2] > lv[1])


# =============================================================================
# NU-root equivalence
# =============================================================================

def test_nu_root_recovers_closed_form(default_sys):
    n_top = level_cutoff(default_sys, CutoffPolicy.vertex())
    for n in range(min(5, n_top) + 1):
        want = energy_level(default_sys, n).e_plane
        got = solve_level_energy(default_sys, n)
        assert got == pytest.approx(want, rel=1e-10)


def test_nu_root_with_caller_bracket(default_sys):
    want = energy_level(default_sys, 0).e_plane
    got = solve_level_energy(default_sys, 0, bracket=(-2.0, 0.0))
    assert got == pytest.approx(want, rel=1e-10)


# =============================================================================
# normalized wavefunctions
# =============================================================================

def _grid(lo, hi, n=4001):
    return np.linspace(lo, hi, n)


def test_wavefunction_norm_is_one(default_sys):
    for n in (0, 1):
        phi = normalized_wavefunction(default_sys, n, _grid(-6.0, 20.0))
        norm = np.trapezoid(phi * phi, _grid(-6.0, 20.0))
        assert norm == pytest.approx(1.0, abs=1e-6)


def test_ground_state_is_nodeless(default_sys):
    phi = normalized_wavefunction(default_sys, 0, _grid(-6.0, 20.0))
    body = phi[np.abs(phi) > 1e-9 * np.max(np.abs(phi))]
    assert np.all(body > 0.0) or np.all(body < 0.0)


def test_second_excited_state_has_two_sign_changes():
    sys = PhysicalSystem.dimensionless(b0=5.0)  # N = 4, n = 2 well bound
    x = _grid(-4.0, 12.0)
    phi = normalized_wavefunction(sys, 2, x)
    body = phi[np.abs(phi) > 1e-8 * np.max(np.abs(phi))]
    signs = np.sign(body)
    changes = int(np.sum(signs[1:] != signs[:-1]))
    assert changes == 2


def test_wavefunction_tail_mass_guard(default_sys):
    with pytest.raises(TailMassError):
        normalized_wavefunction(default_sys, 0, _grid(-0.5, 1.0, 64))


def test_wavefunction_normalizability_guard():
    sys = PhysicalSystem.dimensionless(b0=0.6)  # C1 = -1: xi1 = 0 at n = 0
    with pytest.raises(NonNormalizableError):
        normalized_wavefunction(sys, 0, _grid(-6.0, 20.0))


def test_wavefunction_profile_peaks_once(default_sys):
    x = _grid(-6.0, 20.0)
    phi = normalized_wavefunction(default_sys, 0, x)
    assert count_interior_maxima(np.abs(phi)) == 1
