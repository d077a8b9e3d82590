import math

import pytest

from nbthermo.quadrature import QuadratureError, QuadratureSpec, integrate


def test_polynomials_exact():
    # the 15-point Kronrod rule is exact through degree 22 on one panel
    assert integrate(lambda x: x**3, 0.0, 2.0).value == pytest.approx(4.0, rel=1e-15)
    assert integrate(lambda x: x**7 - x, -1.0, 3.0).value == pytest.approx(
        (3.0**8 - 1.0) / 8.0 - (9.0 - 1.0) / 2.0, rel=1e-14
    )


def test_exponential_closed_form():
    out = integrate(math.exp, 0.0, 1.0)
    assert out.value == pytest.approx(math.e - 1.0, rel=1e-14)
    out = integrate(lambda x: math.exp(-x), 0.0, 10.0)
    assert out.value == pytest.approx(1.0 - math.exp(-10.0), rel=1e-13)


def test_reversed_bounds_flip_sign():
    fwd = integrate(lambda x: x * x, 0.0, 1.0).value
    assert integrate(lambda x: x * x, 1.0, 0.0).value == pytest.approx(-fwd, rel=1e-15)
    assert integrate(lambda x: x, 2.0, 2.0).value == 0.0


def test_sharp_gaussian_needs_adaptivity():
    # width 1e-3 peak inside [0, 1]: a single panel misses it entirely
    s = 1e-3
    f = lambda x: math.exp(-((x - 0.37) / s) ** 2)
    out = integrate(f, 0.0, 1.0)
    assert out.value == pytest.approx(s * math.sqrt(math.pi), rel=1e-11)
    assert out.error_bound <= 1e-11 * out.value
    assert out.n_evals > 100


def test_relative_tolerance_is_respected():
    out = integrate(lambda x: 1.0 / (1.0 + x * x), 0.0, 1.0)
    assert out.value == pytest.approx(math.pi / 4.0, rel=1e-13)


def test_nonconvergence_error_carries_estimate():
    spec = QuadratureSpec(rel_tol=1e-12, max_intervals=8)
    f = lambda x: abs(x - 1.0 / 3.0) ** -0.5  # integrable singularity
    with pytest.raises(QuadratureError) as info:
        integrate(f, 0.0, 1.0, spec)
    err = info.value
    exact = 2.0 * math.sqrt(1.0 / 3.0) + 2.0 * math.sqrt(2.0 / 3.0)
    assert err.estimate == pytest.approx(exact, rel=0.05)
    assert err.error_bound > 0.0


def test_nonfinite_bounds_rejected():
    with pytest.raises(ValueError):
        integrate(lambda x: x, 0.0, math.inf)
